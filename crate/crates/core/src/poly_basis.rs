//! Multi-index enumeration and the polynomial feature vector.
//!
//! A local polynomial fit of order `ℓ` in dimension `d` regresses on the
//! features `U(u) = (u^s / s!)` indexed by multi-indices `s` with
//! `|s| = s₁ + … + s_d ≤ ℓ`. There are `C(ℓ+d, d)` of them; they are kept
//! in a fixed order (increasing `|s|`, ties broken lexicographically with
//! the largest leading component first) so that every downstream weight
//! vector is reproducible bit for bit. The first feature is always the
//! constant `1`.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A multi-index `s = (s₁, …, s_d)` of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    components: Vec<u32>,
}

impl MultiIndex {
    /// Builds a multi-index from its components (`d ≥ 1`).
    pub fn new(components: Vec<u32>) -> Self {
        assert!(!components.is_empty(), "multi-index needs d >= 1");
        Self { components }
    }

    /// The components `(s₁, …, s_d)`.
    pub fn components(&self) -> &[u32] {
        &self.components
    }

    /// The order `|s| = s₁ + … + s_d`.
    pub fn order(&self) -> u32 {
        self.components.iter().sum()
    }

    /// The factorial `s! = s₁!·…·s_d!` as a float (exact for the orders
    /// used here).
    pub fn factorial(&self) -> f64 {
        self.components
            .iter()
            .map(|&k| FACTORIALS[k as usize])
            .product()
    }

    /// The monomial `x^s = x₁^{s₁}·…·x_d^{s_d}`.
    pub fn power(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.components.len());
        self.components
            .iter()
            .zip(x)
            .map(|(&k, &xi)| xi.powi(k as i32))
            .product()
    }
}

/// Factorials 0!..=20!, computed once in exact integer arithmetic and
/// converted; values through 18! are exactly representable in an `f64`,
/// the last two round once.
const FACTORIALS: [f64; 21] = {
    let mut f = [1.0; 21];
    let mut acc: u64 = 1;
    let mut k: u64 = 1;
    while k <= 20 {
        acc *= k;
        f[k as usize] = acc as f64;
        k += 1;
    }
    f
};

/// The ordered feature basis for order `ℓ` in dimension `d`.
#[derive(Clone, Debug)]
pub struct Basis {
    order: usize,
    dim: usize,
    indices: Vec<MultiIndex>,
    inv_factorials: Vec<f64>,
}

impl Basis {
    /// The order bound `ℓ`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements, `C(ℓ+d, d)`.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    /// True only for the degenerate zero-length case (never constructed).
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// The ordered multi-indices.
    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    /// The feature vector `U(u)`, component `i` equal to `u^{s⁽ⁱ⁾}/s⁽ⁱ⁾!`.
    pub fn u_vector(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len()];
        self.fill_u_vector(u, &mut out);
        out
    }

    /// Writes `U(u)` into `out` without allocating; the estimator's hot
    /// loop calls this once per data point per evaluation site.
    pub fn fill_u_vector(&self, u: &[f64], out: &mut [f64]) {
        debug_assert_eq!(u.len(), self.dim);
        debug_assert_eq!(out.len(), self.len());
        if self.dim == 1 {
            // In one dimension the basis is exactly (1, u, u²/2!, …): build
            // the powers by one running product.
            let x = u[0];
            let mut pow = 1.0;
            for (o, inv_fact) in out.iter_mut().zip(&self.inv_factorials) {
                *o = pow * inv_fact;
                pow *= x;
            }
        } else {
            for ((o, idx), inv_fact) in out.iter_mut().zip(&self.indices).zip(&self.inv_factorials)
            {
                *o = idx.power(u) * inv_fact;
            }
        }
    }
}

/// Enumerates the basis of all multi-indices with `|s| ≤ ℓ` in dimension
/// `d`, in the crate-wide canonical order.
pub fn enumerate(order: usize, dim: usize) -> Basis {
    assert!(dim >= 1, "dimension must be positive");
    assert!(order <= 20, "orders beyond 20 are not supported");
    let mut indices = Vec::new();
    let mut current = vec![0u32; dim];
    collect_indices(order as u32, dim, 0, &mut current, &mut indices);
    // Increasing |s|; ties lexicographically with the largest first
    // component first, i.e. descending component order.
    indices.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| b.components.cmp(&a.components))
    });
    let inv_factorials = indices.iter().map(|s| 1.0 / s.factorial()).collect();
    Basis {
        order,
        dim,
        indices,
        inv_factorials,
    }
}

fn collect_indices(
    order: u32,
    dim: usize,
    pos: usize,
    current: &mut Vec<u32>,
    out: &mut Vec<MultiIndex>,
) {
    if pos == dim {
        out.push(MultiIndex::new(current.clone()));
        return;
    }
    let used: u32 = current[..pos].iter().sum();
    for k in 0..=(order - used) {
        current[pos] = k;
        collect_indices(order, dim, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// Evaluates the Taylor polynomial of degree `ℓ` at `x`, expanded at `y`,
/// from the supplied partial derivatives `D^s f(y)`:
/// `Σ_{|s| ≤ ℓ} (x−y)^s / s! · D^s f(y)`.
///
/// Every multi-index with `|s| ≤ ℓ` must be present in `derivs`.
pub fn taylor_eval(
    derivs: &HashMap<MultiIndex, f64>,
    y: &[f64],
    x: &[f64],
    order: usize,
) -> Result<f64> {
    assert_eq!(x.len(), y.len());
    let basis = enumerate(order, y.len());
    let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let mut acc = 0.0;
    for idx in basis.indices() {
        let d = derivs
            .get(idx)
            .ok_or_else(|| Error::IncompleteDerivatives(idx.components().to_vec()))?;
        acc += idx.power(&diff) / idx.factorial() * d;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        let mut acc = 1usize;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn single_index_in_dimension_three_at_order_zero() {
        let b = enumerate(0, 3);
        assert_eq!(b.len(), 1);
        assert_eq!(b.indices()[0].components(), &[0, 0, 0]);
    }

    #[test]
    fn counts_match_binomial_for_all_small_cases() {
        for ell in 0..=8 {
            for d in 1..=3 {
                let b = enumerate(ell, d);
                assert_eq!(
                    b.len(),
                    binomial(ell + d, d),
                    "count mismatch at ell={ell}, d={d}"
                );
            }
        }
    }

    #[test]
    fn one_dimensional_basis_is_the_power_sequence() {
        let b = enumerate(7, 1);
        let comps: Vec<u32> = b.indices().iter().map(|s| s.components()[0]).collect();
        assert_eq!(comps, (0..=7).collect::<Vec<_>>());
    }

    #[test]
    fn order_and_tie_break_are_canonical() {
        // ℓ=2, d=2: orders 0,1,1,2,2,2 with the larger first component
        // leading inside each order block.
        let b = enumerate(2, 2);
        let comps: Vec<&[u32]> = b.indices().iter().map(|s| s.components()).collect();
        assert_eq!(
            comps,
            vec![
                &[0u32, 0][..],
                &[1, 0],
                &[0, 1],
                &[2, 0],
                &[1, 1],
                &[0, 2]
            ]
        );
    }

    #[test]
    fn u_vector_at_zero_is_the_first_unit_vector() {
        for (ell, d) in [(0, 1), (3, 1), (2, 2), (2, 3)] {
            let b = enumerate(ell, d);
            let u = b.u_vector(&vec![0.0; d]);
            assert_eq!(u[0], 1.0);
            assert!(u[1..].iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn u_vector_in_one_dimension() {
        let b = enumerate(2, 1);
        let u = b.u_vector(&[2.0]);
        assert_eq!(u, vec![1.0, 2.0, 2.0]); // 2⁰/0!, 2¹/1!, 2²/2!
    }

    #[test]
    fn u_vector_order_one_in_two_dimensions() {
        let b = enumerate(1, 2);
        let u = b.u_vector(&[3.0, 5.0]);
        assert_eq!(u, vec![1.0, 3.0, 5.0]);
    }

    #[test]
    fn u_vector_generic_path_matches_definition() {
        let b = enumerate(3, 2);
        let point = [0.7, -1.3];
        let u = b.u_vector(&point);
        for (i, idx) in b.indices().iter().enumerate() {
            let want = idx.power(&point) / idx.factorial();
            assert!((u[i] - want).abs() < 1e-14);
        }
    }

    #[test]
    fn taylor_of_a_constant() {
        let mut derivs = HashMap::new();
        derivs.insert(MultiIndex::new(vec![0]), 4.2);
        derivs.insert(MultiIndex::new(vec![1]), 0.0);
        let v = taylor_eval(&derivs, &[1.0], &[3.0], 1).unwrap();
        assert_eq!(v, 4.2);
    }

    #[test]
    fn taylor_reproduces_a_cubic_exactly() {
        // f(x) = x³ − x at y = 0 with ℓ = 3: derivatives −1 (first) and
        // 6 (third); f(2) = 6.
        let mut derivs = HashMap::new();
        derivs.insert(MultiIndex::new(vec![0]), 0.0);
        derivs.insert(MultiIndex::new(vec![1]), -1.0);
        derivs.insert(MultiIndex::new(vec![2]), 0.0);
        derivs.insert(MultiIndex::new(vec![3]), 6.0);
        let v = taylor_eval(&derivs, &[0.0], &[2.0], 3).unwrap();
        assert!((v - 6.0).abs() < 1e-12);
    }

    #[test]
    fn first_order_taylor_error_of_the_cubic_is_quadratic() {
        // ℓ = 1 at y = 0: T(x) = −x, so |f(0.1) − T(0.1)| = 0.001 ≤ L·0.1².
        let mut derivs = HashMap::new();
        derivs.insert(MultiIndex::new(vec![0]), 0.0);
        derivs.insert(MultiIndex::new(vec![1]), -1.0);
        let t = taylor_eval(&derivs, &[0.0], &[0.1], 1).unwrap();
        assert!((t - (-0.1)).abs() < 1e-15);
        let f = 0.1f64.powi(3) - 0.1;
        assert!((f - t).abs() - 0.001 < 1e-12);
        assert!((f - t).abs() <= 0.1 * 0.1 * 0.1 + 1e-15);
    }

    #[test]
    fn missing_derivative_is_reported() {
        let mut derivs = HashMap::new();
        derivs.insert(MultiIndex::new(vec![0]), 1.0);
        let err = taylor_eval(&derivs, &[0.0], &[1.0], 1).unwrap_err();
        assert!(matches!(err, Error::IncompleteDerivatives(c) if c == vec![1]));
    }
}
