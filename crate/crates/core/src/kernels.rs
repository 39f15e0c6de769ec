//! The built-in kernel family and its numerical property checks.
//!
//! Four radial kernels drive everything downstream. Three are singular —
//! they blow up like `‖u‖^(−a)` at the origin, which is exactly what makes
//! the local polynomial estimator interpolate the data — and one is the
//! classical rectangular kernel kept for comparison:
//!
//! * `K1(u) = ‖u‖^(−a)·1(‖u‖ ≤ 1)` — singular, but discontinuous at the
//!   support boundary;
//! * `K2(u) = ‖u‖^(−a)·(1 − ‖u‖)₊²` — singular and continuous away from
//!   the origin;
//! * `K3(u) = ‖u‖^(−a)·cos²(π‖u‖/2)·1(‖u‖ ≤ 1)` — ditto;
//! * `Krect(u) = 1(‖u‖ ≤ 1)` — bounded.
//!
//! The exponent must satisfy `0 ≤ a < d/2` so that `∫ K² < ∞`, the
//! square-integrability needed for the estimator's risk bounds;
//! [`check_square_integrable`] verifies that property numerically rather
//! than by trusting the formula.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numerics::quad_1d;

/// Names of the built-in kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelName {
    K1,
    K2,
    K3,
    Rect,
}

impl FromStr for KernelName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k1" => Ok(Self::K1),
            "k2" => Ok(Self::K2),
            "k3" => Ok(Self::K3),
            "rect" => Ok(Self::Rect),
            other => Err(Error::InvalidParameter(format!(
                "unknown kernel name {other:?} (expected k1, k2, k3 or rect)"
            ))),
        }
    }
}

impl fmt::Display for KernelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::K1 => "k1",
            Self::K2 => "k2",
            Self::K3 => "k3",
            Self::Rect => "rect",
        };
        f.write_str(s)
    }
}

/// A radial kernel together with the metadata the estimator relies on.
#[derive(Clone, Debug)]
pub struct Kernel {
    name: KernelName,
    a: f64,
    singular: bool,
    continuous_off_origin: bool,
    support_radius: f64,
}

impl Kernel {
    /// Kernel value at a point of `R^d`; the built-ins are radial, so this
    /// is [`Kernel::eval_radial`] at the Euclidean norm.
    pub fn eval(&self, u: &[f64]) -> f64 {
        let r = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.eval_radial(r)
    }

    /// Kernel value as a function of the radius `r = ‖u‖ ≥ 0`.
    ///
    /// For singular kernels the value at `r = 0` is the distinguished
    /// `+∞` marker: the estimator never feeds the singularity into
    /// arithmetic (data-point coincidence is routed to the interpolation
    /// branch first), so the marker only ever signals a caller bug.
    pub fn eval_radial(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0);
        if self.singular && r == 0.0 {
            return f64::INFINITY;
        }
        match self.name {
            KernelName::Rect => {
                if r <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            KernelName::K1 => {
                if r <= 1.0 {
                    r.powf(-self.a)
                } else {
                    0.0
                }
            }
            KernelName::K2 => {
                if r >= 1.0 {
                    0.0
                } else {
                    let t = 1.0 - r;
                    r.powf(-self.a) * t * t
                }
            }
            KernelName::K3 => {
                if r <= 1.0 {
                    let c = (std::f64::consts::FRAC_PI_2 * r).cos();
                    r.powf(-self.a) * c * c
                } else {
                    0.0
                }
            }
        }
    }

    /// The built-in this kernel was constructed as.
    pub fn name(&self) -> KernelName {
        self.name
    }

    /// The singularity exponent `a` (zero for non-singular kernels).
    pub fn exponent(&self) -> f64 {
        self.a
    }

    /// Whether the kernel diverges at the origin.
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    /// Whether the kernel is continuous on `R^d` away from the origin
    /// (false for `K1` and `Krect`, whose support boundary jumps).
    pub fn continuous_off_origin(&self) -> bool {
        self.continuous_off_origin
    }

    /// Radius beyond which the kernel vanishes identically.
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }
}

/// Builds one of the built-in kernels.
///
/// For the singular shapes the exponent must lie in `[0, dim/2)`; larger
/// exponents would make `∫ K²` diverge. `Krect` ignores `a`. With `a = 0`
/// the "singular" shapes degenerate to bounded kernels and are flagged as
/// non-singular.
pub fn make_builtin(name: KernelName, a: f64, dim: usize) -> Result<Kernel> {
    assert!(dim >= 1, "dimension must be positive");
    if name == KernelName::Rect {
        return Ok(Kernel {
            name,
            a: 0.0,
            singular: false,
            continuous_off_origin: false,
            support_radius: 1.0,
        });
    }
    let limit = dim as f64 / 2.0;
    if !a.is_finite() || a < 0.0 || a >= limit {
        return Err(Error::InvalidExponent { a, d: dim, limit });
    }
    let singular = a > 0.0;
    let continuous_off_origin = match name {
        KernelName::K2 | KernelName::K3 => true,
        // K1 jumps from 1^(−a) to 0 at the support boundary.
        KernelName::K1 | KernelName::Rect => false,
    };
    Ok(Kernel {
        name,
        a,
        singular,
        continuous_off_origin,
        support_radius: 1.0,
    })
}

/// Outcome of the numerical square-integrability check.
#[derive(Clone, Copy, Debug)]
pub struct SquareIntegrability {
    /// Whether `∫ K²(u) du` converged numerically.
    pub finite: bool,
    /// The value of the integral when it did.
    pub value: Option<f64>,
}

/// Numerically checks `∫_{R^d} K²(u) du < ∞` by radial quadrature:
/// the integral equals `surface(d) · ∫₀^R K(r)²·r^(d−1) dr` with
/// `surface(d) = 2π^(d/2)/Γ(d/2)` the unit-sphere area. A divergent
/// quadrature is reported as `finite: false` rather than as an error —
/// non-integrability is an answer here, not a failure.
pub fn check_square_integrable(kernel: &Kernel, dim: usize) -> Result<SquareIntegrability> {
    assert!(dim >= 1, "dimension must be positive");
    let radius = kernel.support_radius();
    let dm1 = (dim - 1) as i32;
    let integrand = |r: f64| kernel.eval_radial(r).powi(2) * r.powi(dm1);
    match quad_1d(integrand, 0.0, radius, 1e-8) {
        Ok(v) => Ok(SquareIntegrability {
            finite: true,
            value: Some(surface_area(dim) * v),
        }),
        Err(Error::QuadratureDiverged) => Ok(SquareIntegrability {
            finite: false,
            value: None,
        }),
        Err(e) => Err(e),
    }
}

/// A numerically certified lower bound for the kernel near the origin.
#[derive(Clone, Copy, Debug)]
pub struct SingularityBound {
    /// The certified constant `c₀ > 0` with `K(u) ≥ c₀` for `‖u‖ ≤ delta`.
    pub c0: f64,
    /// The inner radius on which the bound holds (half the support radius).
    pub delta: f64,
}

/// Verifies that the kernel is bounded below by a positive constant on the
/// inner half of its support — the property that forces the estimator's
/// windows to actually see their data. The bound is the minimum over a
/// fine radial grid on `(0, delta]`.
pub fn singularity_bound(kernel: &Kernel) -> Result<SingularityBound> {
    const GRID: usize = 10_000;
    let delta = kernel.support_radius() / 2.0;
    let mut c0 = f64::INFINITY;
    for j in 1..=GRID {
        let r = delta * j as f64 / GRID as f64;
        c0 = c0.min(kernel.eval_radial(r));
    }
    if c0 > 0.0 && c0.is_finite() {
        Ok(SingularityBound { c0, delta })
    } else {
        Err(Error::NoLowerBound)
    }
}

/// Area of the unit sphere in `R^d`, `2π^(d/2)/Γ(d/2)`.
fn surface_area(dim: usize) -> f64 {
    2.0 * std::f64::consts::PI.powf(dim as f64 / 2.0) / gamma_half(dim as u32)
}

/// Γ(k/2) for positive integer `k`, by the recurrence Γ(x+1) = x·Γ(x)
/// down to Γ(1/2) = √π or Γ(1) = 1.
fn gamma_half(k: u32) -> f64 {
    assert!(k >= 1);
    let mut acc = if k % 2 == 1 {
        std::f64::consts::PI.sqrt()
    } else {
        1.0
    };
    let mut j = k;
    while j > 2 {
        j -= 2;
        acc *= j as f64 / 2.0;
    }
    acc
}
