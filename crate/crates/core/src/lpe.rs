//! The local polynomial estimator and its interpolation diagnostics.
//!
//! Given data `(X_1, Y_1), …, (X_n, Y_n)` in `R^d × R`, the LP(ℓ) estimator
//! at a point `x` is the weighted least-squares fit of a degree-ℓ polynomial
//! on the kernel window around `x`, read off at `x` itself:
//!
//! ```text
//! f_n(x) = Σ_i Y_i · W_ni(x),
//! W_ni(x) = (Uᵀ(0) / (n hᵈ)) · B_nx⁺ · U((X_i − x)/h) · K((X_i − x)/h),
//! B_nx   = (1 / (n hᵈ)) Σ_i U((X_i − x)/h) Uᵀ((X_i − x)/h) K((X_i − x)/h),
//! ```
//!
//! with `U` the scaled monomial feature vector of [`crate::poly_basis`] and
//! `B⁺` the Moore–Penrose pseudo-inverse. With a kernel that diverges at
//! the origin the weights concentrate on any data point the evaluation
//! point approaches, and the estimator interpolates: its limit at `X_j` is
//! `Y_j`, which is also the value this implementation returns there.

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::numerics::{
    min_eigenvalue, solve_psd_first_column, PsdSolveWorkspace, SymMatrix, DEFAULT_PINV_CUTOFF,
};
use crate::poly_basis::{enumerate, Basis};

/// A regression sample: `n` pairwise-distinct design points in `R^d` with
/// one real response each.
#[derive(Clone, Debug)]
pub struct Dataset {
    points: Vec<f64>, // row-major n × dim
    responses: Vec<f64>,
    dim: usize,
    max_abs_response: f64,
}

impl Dataset {
    /// Builds a dataset from row-major point coordinates (`n·dim` values)
    /// and `n` responses.
    ///
    /// All values must be finite and the points pairwise distinct;
    /// duplicated design points make interpolation ill-posed and are
    /// rejected with [`Error::DuplicateDesignPoints`].
    pub fn new(points: Vec<f64>, responses: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let n = responses.len();
        if n == 0 {
            return Err(Error::InvalidParameter("dataset must be non-empty".into()));
        }
        if points.len() != n * dim {
            return Err(Error::InvalidParameter(format!(
                "got {} coordinates for {} points in dimension {}",
                points.len(),
                n,
                dim
            )));
        }
        if points.iter().chain(&responses).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "data contains non-finite values".into(),
            ));
        }
        // Distinctness: sort indices by point and compare neighbours, so the
        // check is O(n log n) rather than all-pairs. Equality here is
        // floating-point equality, the same comparison `predict` uses to
        // recognize a data point.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            let a = &points[i * dim..(i + 1) * dim];
            let b = &points[j * dim..(j + 1) * dim];
            a.partial_cmp(b).expect("finite values are totally ordered")
        });
        for w in order.windows(2) {
            let a = &points[w[0] * dim..(w[0] + 1) * dim];
            let b = &points[w[1] * dim..(w[1] + 1) * dim];
            if a == b {
                return Err(Error::DuplicateDesignPoints(
                    w[0].min(w[1]),
                    w[0].max(w[1]),
                ));
            }
        }
        let max_abs_response = responses.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
        Ok(Self {
            points,
            responses,
            dim,
            max_abs_response,
        })
    }

    /// Convenience constructor for one-dimensional designs.
    pub fn from_univariate(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Self::new(xs, ys, 1)
    }

    /// Number of observations.
    pub fn len(&self) -> usize {
        self.responses.len()
    }

    /// Always false: empty datasets cannot be constructed.
    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    /// Ambient dimension of the design points.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of the `i`-th design point.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// The `i`-th response.
    pub fn response(&self, i: usize) -> f64 {
        self.responses[i]
    }

    /// All responses.
    pub fn responses(&self) -> &[f64] {
        &self.responses
    }

    /// `max_i |Y_i|`, cached at construction (enters the truncation level).
    pub fn max_abs_response(&self) -> f64 {
        self.max_abs_response
    }
}

/// Kernel weights of the estimator at one evaluation point.
#[derive(Clone, Debug)]
pub struct WeightVector {
    /// One weight per observation; exactly zero outside the kernel window.
    pub weights: Vec<f64>,
    /// The evaluation point the weights belong to.
    pub at_point: Vec<f64>,
}

/// A fitted-configuration handle: data, polynomial order, bandwidth and
/// kernel. The model is immutable; every evaluation method takes `&self`
/// and may be called concurrently.
#[derive(Clone, Debug)]
pub struct LpeModel {
    data: Dataset,
    order: usize,
    bandwidth: f64,
    kernel: Kernel,
    basis: Basis,
}

/// Reusable scratch buffers for repeated evaluation of one model; create
/// with [`LpeModel::eval_scratch`] and keep one instance per thread. All
/// prediction goes through these buffers, so a reused scratch makes the
/// hot path allocation-free.
pub struct EvalScratch {
    u: Vec<f64>,
    uvec: Vec<f64>,
    moments: Vec<f64>,
    b: Vec<f64>, // m × m, row-major
    solution: Vec<f64>,
    ws: PsdSolveWorkspace,
}

impl EvalScratch {
    fn new(m: usize, dim: usize) -> Self {
        Self {
            u: vec![0.0; dim],
            uvec: vec![0.0; m],
            moments: vec![0.0; m],
            b: vec![0.0; m * m],
            solution: vec![0.0; m],
            ws: PsdSolveWorkspace::new(m),
        }
    }
}

impl LpeModel {
    /// Builds an LP(`order`) model with bandwidth `bandwidth > 0`.
    pub fn new(data: Dataset, order: usize, bandwidth: f64, kernel: Kernel) -> Result<Self> {
        if !bandwidth.is_finite() || bandwidth <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be positive and finite, got {bandwidth}"
            )));
        }
        let basis = enumerate(order, data.dim());
        Ok(Self {
            data,
            order,
            bandwidth,
            kernel,
            basis,
        })
    }

    /// The training data.
    pub fn data(&self) -> &Dataset {
        &self.data
    }

    /// The polynomial order ℓ.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The bandwidth h.
    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    /// The kernel.
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    /// The polynomial feature basis (dimension `C(ℓ+d, d)`).
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// Fresh scratch buffers sized for this model.
    pub fn eval_scratch(&self) -> EvalScratch {
        EvalScratch::new(self.basis.len(), self.data.dim())
    }

    /// The normal matrix `B_nx` of the local least-squares problem at `x`.
    ///
    /// Positive semidefinite by construction; the zero matrix when no data
    /// point falls in the kernel window. Evaluating a singular kernel
    /// exactly at a data point is a contract violation here (callers that
    /// want a value at data points go through [`LpeModel::predict`], which
    /// returns the stored response) and yields
    /// [`Error::DataPointCoincidence`].
    pub fn design_matrix(&self, x: &[f64]) -> Result<SymMatrix> {
        self.check_point(x);
        let m = self.basis.len();
        let mut b = SymMatrix::zeros(m);
        let mut u = vec![0.0; self.data.dim()];
        let mut uvec = vec![0.0; m];
        for i in 0..self.data.len() {
            let Some(k) = self.window_term(i, x, &mut u)? else {
                continue;
            };
            self.basis.fill_u_vector(&u, &mut uvec);
            for p in 0..m {
                for q in p..m {
                    b.set(p, q, b.get(p, q) + uvec[p] * uvec[q] * k);
                }
            }
        }
        let norm = self.normalization();
        for p in 0..m {
            for q in p..m {
                b.set(p, q, b.get(p, q) * norm);
            }
        }
        Ok(b)
    }

    /// The weight vector `(W_n1(x), …, W_nn(x))`.
    ///
    /// Observations outside the kernel window get weight exactly zero.
    /// When `B_nx` is nonsingular the weights sum to one and annihilate
    /// all centred monomials of degree `1..=ℓ`; degenerate `B_nx` is
    /// absorbed by the pseudo-inverse.
    pub fn weights(&self, x: &[f64]) -> Result<WeightVector> {
        self.check_point(x);
        let mut sc = self.eval_scratch();
        self.assemble(x, &mut sc)?;
        self.solve(&mut sc);
        let norm = self.normalization();
        let mut weights = vec![0.0; self.data.len()];
        for (i, w) in weights.iter_mut().enumerate() {
            let Some(k) = self.window_term(i, x, &mut sc.u)? else {
                continue;
            };
            self.basis.fill_u_vector(&sc.u, &mut sc.uvec);
            let dot: f64 = sc.solution.iter().zip(&sc.uvec).map(|(s, u)| s * u).sum();
            *w = norm * k * dot;
        }
        Ok(WeightVector {
            weights,
            at_point: x.to_vec(),
        })
    }

    /// The estimator `f_n(x) = Σ_i Y_i W_ni(x)`.
    ///
    /// Two special cases are part of the contract:
    ///
    /// * singular kernel and `x` equal (exact floating-point coordinate
    ///   equality) to a design point `X_j` → returns `Y_j`, the limit value
    ///   of the estimator at its interpolation points;
    /// * no data in the kernel window → returns `0.0` (no local
    ///   information).
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut sc = self.eval_scratch();
        self.predict_with(x, &mut sc)
    }

    /// [`LpeModel::predict`] against caller-provided scratch buffers.
    pub fn predict_with(&self, x: &[f64], sc: &mut EvalScratch) -> f64 {
        self.check_point(x);
        if self.kernel.is_singular() {
            if let Some(j) = self.coincident_index(x) {
                return self.data.response(j);
            }
        }
        let any = self
            .assemble(x, sc)
            .expect("coincidence is handled before the weighted sum");
        if !any {
            return 0.0;
        }
        self.solve(sc);
        let dot: f64 = sc
            .solution
            .iter()
            .zip(&sc.moments)
            .map(|(s, c)| s * c)
            .sum();
        self.normalization() * dot
    }

    /// The truncated estimator: [`LpeModel::predict`] clamped to `[−μ, μ]`
    /// with `μ = max(l0, max_i |Y_i|)`.
    pub fn predict_truncated(&self, x: &[f64], l0: f64) -> f64 {
        let mut sc = self.eval_scratch();
        self.predict_truncated_with(x, l0, &mut sc)
    }

    /// [`LpeModel::predict_truncated`] against caller-provided scratch.
    pub fn predict_truncated_with(&self, x: &[f64], l0: f64, sc: &mut EvalScratch) -> f64 {
        assert!(l0 > 0.0, "truncation level must be positive");
        let mu = l0.max(self.data.max_abs_response());
        self.predict_with(x, sc).clamp(-mu, mu)
    }

    /// Minimum eigenvalue of the indicator-windowed normal matrix, over a
    /// grid of evaluation points.
    ///
    /// The windowed matrix replaces the kernel by the indicator of radius
    /// `delta` (no singularity, no taper), so this measures whether every
    /// neighbourhood the estimator relies on carries enough design points
    /// to identify a degree-ℓ fit. `grid` is row-major like [`Dataset`]
    /// points; a grid point with an empty window contributes eigenvalue 0.
    pub fn min_eigen_over_support(&self, delta: f64, grid: &[f64]) -> f64 {
        assert!(delta > 0.0, "window radius must be positive");
        let d = self.data.dim();
        assert!(
            !grid.is_empty() && grid.len() % d == 0,
            "grid must hold whole points"
        );
        let m = self.basis.len();
        let mut u = vec![0.0; d];
        let mut uvec = vec![0.0; m];
        let norm = self.normalization();
        let mut smallest = f64::INFINITY;
        for x in grid.chunks_exact(d) {
            let mut b = SymMatrix::zeros(m);
            for i in 0..self.data.len() {
                let mut r2 = 0.0;
                for (c, (pi, xi)) in u.iter_mut().zip(self.data.point(i).iter().zip(x)) {
                    *c = (pi - xi) / self.bandwidth;
                    r2 += *c * *c;
                }
                if r2.sqrt() > delta {
                    continue;
                }
                self.basis.fill_u_vector(&u, &mut uvec);
                for p in 0..m {
                    for q in p..m {
                        b.set(p, q, b.get(p, q) + uvec[p] * uvec[q]);
                    }
                }
            }
            for p in 0..m {
                for q in p..m {
                    b.set(p, q, b.get(p, q) * norm);
                }
            }
            let lambda = min_eigenvalue(&b).expect("windowed matrix is finite");
            smallest = smallest.min(lambda);
        }
        smallest
    }

    /// Numerical check of the interpolation limit `f_n(x) → Y_j` as
    /// `x → X_j`.
    ///
    /// For each radius `r` the estimator is evaluated at the `2d` probe
    /// points `X_j ± r·e_k` and the largest deviation `|f_n(probe) − Y_j|`
    /// is recorded. For singular kernels the deviations shrink with `r`;
    /// for bounded kernels they need not, and the caller draws its own
    /// conclusions.
    pub fn interpolation_limit_check(&self, j: usize, radii: &[f64]) -> Vec<(f64, f64)> {
        assert!(j < self.data.len(), "probe index out of range");
        assert!(
            radii.iter().all(|r| r.is_finite() && *r > 0.0),
            "radii must be positive"
        );
        let d = self.data.dim();
        let xj = self.data.point(j).to_vec();
        let yj = self.data.response(j);
        let mut sc = self.eval_scratch();
        let mut probe = xj.clone();
        radii
            .iter()
            .map(|&r| {
                let mut dev = 0.0_f64;
                for k in 0..d {
                    for sign in [-1.0, 1.0] {
                        probe.copy_from_slice(&xj);
                        probe[k] += sign * r;
                        let v = self.predict_with(&probe, &mut sc);
                        dev = dev.max((v - yj).abs());
                    }
                }
                (r, dev)
            })
            .collect()
    }

    /// `1 / (n hᵈ)`.
    fn normalization(&self) -> f64 {
        1.0 / (self.data.len() as f64 * self.bandwidth.powi(self.data.dim() as i32))
    }

    fn check_point(&self, x: &[f64]) {
        assert_eq!(x.len(), self.data.dim(), "evaluation point has wrong dimension");
        assert!(x.iter().all(|v| v.is_finite()), "evaluation point must be finite");
    }

    /// Index of the design point equal to `x`, if any.
    fn coincident_index(&self, x: &[f64]) -> Option<usize> {
        (0..self.data.len()).find(|&i| self.data.point(i) == x)
    }

    /// Kernel value at observation `i` as seen from `x`, with the rescaled
    /// offset `(X_i − x)/h` written into `u`; `None` outside the window.
    fn window_term(&self, i: usize, x: &[f64], u: &mut [f64]) -> Result<Option<f64>> {
        let mut r2 = 0.0;
        for (c, (pi, xi)) in u.iter_mut().zip(self.data.point(i).iter().zip(x)) {
            *c = (pi - xi) / self.bandwidth;
            r2 += *c * *c;
        }
        let r = r2.sqrt();
        if r > self.kernel.support_radius() {
            return Ok(None);
        }
        if self.kernel.is_singular() && r == 0.0 {
            return Err(Error::DataPointCoincidence(i));
        }
        Ok(Some(self.kernel.eval_radial(r)))
    }

    /// One pass over the data accumulating the unnormalized normal matrix
    /// into `sc.b` and the moment vector `Σ_i Y_i K_i U_i` into
    /// `sc.moments`. Returns whether any observation fell in the window.
    fn assemble(&self, x: &[f64], sc: &mut EvalScratch) -> Result<bool> {
        let m = self.basis.len();
        sc.b.fill(0.0);
        sc.moments.fill(0.0);
        let mut any = false;
        for i in 0..self.data.len() {
            let Some(k) = self.window_term(i, x, &mut sc.u)? else {
                continue;
            };
            any = true;
            self.basis.fill_u_vector(&sc.u, &mut sc.uvec);
            let yk = self.data.response(i) * k;
            for p in 0..m {
                let upk = sc.uvec[p] * k;
                let row = &mut sc.b[p * m..(p + 1) * m];
                for q in p..m {
                    row[q] += upk * sc.uvec[q];
                }
                sc.moments[p] += yk * sc.uvec[p];
            }
        }
        if any {
            let norm = self.normalization();
            for p in 0..m {
                for q in p..m {
                    let v = sc.b[p * m + q] * norm;
                    sc.b[p * m + q] = v;
                    sc.b[q * m + p] = v;
                }
            }
        }
        Ok(any)
    }

    /// Writes the first column of `B⁺` into `sc.solution`.
    fn solve(&self, sc: &mut EvalScratch) {
        let m = self.basis.len();
        solve_psd_first_column(&sc.b, m, DEFAULT_PINV_CUTOFF, &mut sc.ws, &mut sc.solution);
    }
}
