//! Symmetric matrices, a cyclic Jacobi eigensolver, and the Moore–Penrose
//! pseudo-inverse used to absorb degenerate normal matrices.

use crate::error::{Error, Result};

/// Default relative cutoff below which eigenvalues are treated as zero when
/// forming a pseudo-inverse.
pub(crate) const DEFAULT_PINV_CUTOFF: f64 = 1e-12;

/// Smallest pivot (relative to the unit diagonal of the equilibrated matrix)
/// for which the fast Cholesky-type factorization is trusted; anything below
/// falls back to the eigendecomposition path.
const LDL_PIVOT_TOL: f64 = 1e-6;

/// Sweep limit for the Jacobi eigensolver; convergence is quadratic and
/// matrices here have dimension at most a few tens, so this is generous.
const MAX_JACOBI_SWEEPS: usize = 50;

/// A dense symmetric matrix with exact, constructive symmetry: every write
/// updates both mirrored entries, so `m[i][j] == m[j][i]` holds bitwise.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>, // row-major dim × dim
}

impl SymMatrix {
    /// The zero matrix of the given dimension (`dim >= 1`).
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "SymMatrix dimension must be positive");
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    /// The identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    /// Builds a matrix by evaluating `f(i, j)` for `i <= j` and mirroring,
    /// which guarantees exact symmetry regardless of `f`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                m.data[i * dim + j] = v;
                m.data[j * dim + i] = v;
            }
        }
        m
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
        self.data[j * self.dim + i] = v;
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Matrix–vector product (used by tests and diagnostics).
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            out[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        out
    }

    #[cfg(test)]
    pub(crate) fn data(&self) -> &[f64] {
        &self.data
    }

    fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidMatrix)
        }
    }
}

/// Eigendecomposition of a symmetric matrix: `values` ascending, `vector(k)`
/// the unit eigenvector paired with `values()[k]`.
#[derive(Clone, Debug)]
pub struct Eigen {
    dim: usize,
    values: Vec<f64>,
    vectors: Vec<f64>, // column-major: vectors[k*dim + i] = component i of eigenvector k
}

impl Eigen {
    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvector paired with `values()[k]`.
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }
}

/// Full eigendecomposition via cyclic Jacobi rotations.
///
/// Errors with [`Error::InvalidMatrix`] on non-finite entries (or in the
/// never-observed event that the sweep limit is exhausted).
pub fn eigen_sym(m: &SymMatrix) -> Result<Eigen> {
    m.check_finite()?;
    let n = m.dim;
    let mut a = m.data.clone();
    let mut v = vec![0.0; n * n];
    let mut d = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut z = vec![0.0; n];
    if !jacobi_inplace(&mut a, &mut v, &mut d, &mut b, &mut z, n) {
        return Err(Error::InvalidMatrix);
    }
    // Sort ascending and copy eigenvectors out column-major.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let mut values = Vec::with_capacity(n);
    let mut vectors = vec![0.0; n * n];
    for (k, &src) in order.iter().enumerate() {
        values.push(d[src]);
        for i in 0..n {
            vectors[k * n + i] = v[i * n + src];
        }
    }
    Ok(Eigen {
        dim: n,
        values,
        vectors,
    })
}

/// Moore–Penrose pseudo-inverse of a symmetric matrix.
///
/// Computed from the eigendecomposition; eigenvalues with
/// `|λ| <= tol · max|λ|` are treated as exact zeros and inverted to zero,
/// which is what absorbs degenerate normal matrices without an error path.
/// The result satisfies the four Moore–Penrose identities to roughly
/// square-root machine precision at these dimensions.
pub fn pseudo_inverse(m: &SymMatrix, tol: f64) -> Result<SymMatrix> {
    m.check_finite()?;
    let n = m.dim;
    let eig = eigen_sym(m)?;
    let lmax = eig
        .values()
        .iter()
        .fold(0.0_f64, |acc, &l| acc.max(l.abs()));
    if lmax == 0.0 {
        return Ok(SymMatrix::zeros(n));
    }
    let tol = tol.max(0.0);
    let inv: Vec<f64> = eig
        .values()
        .iter()
        .map(|&l| if l.abs() > tol * lmax { 1.0 / l } else { 0.0 })
        .collect();
    Ok(SymMatrix::from_fn(n, |i, j| {
        (0..n)
            .map(|k| inv[k] * eig.vector(k)[i] * eig.vector(k)[j])
            .sum()
    }))
}

/// Smallest eigenvalue of a symmetric matrix, accurate to well below
/// `1e-10` relative to the spectral norm at these dimensions.
pub fn min_eigenvalue(m: &SymMatrix) -> Result<f64> {
    let eig = eigen_sym(m)?;
    Ok(eig.values()[0])
}

/// First column of the (pseudo-)inverse of a positive semidefinite matrix.
///
/// This is the work-horse of the estimator: predictions need only
/// `B⁺ e₁`, not all of `B⁺`. Two concerns are balanced here.
///
/// * Accuracy: the factorial scaling of the polynomial features makes the
///   raw normal matrix extremely ill-conditioned at higher orders even when
///   it is far from singular in any structural sense. All solves therefore
///   run on the symmetrically equilibrated matrix (unit diagonal), whose
///   conditioning reflects the actual geometry of the design; the answer is
///   mapped back exactly.
/// * Degeneracy: when the equilibrated matrix is rank-deficient (eigenvalues
///   at or below `cutoff` relative), the minimum-norm convention of the
///   pseudo-inverse is tied to the original, unscaled coordinates, so the
///   rank-deficient branch recomputes in those coordinates.
///
/// Returns `true` when the matrix was treated as full rank.
pub(crate) fn solve_psd_first_column(
    m: &[f64],
    n: usize,
    cutoff: f64,
    ws: &mut PsdSolveWorkspace,
    out: &mut [f64],
) -> bool {
    debug_assert_eq!(m.len(), n * n);
    debug_assert_eq!(out.len(), n);
    // Equilibrate: scale[i] = 1/sqrt(m[i][i]); a zero diagonal entry of a PSD
    // matrix forces its whole row to zero, so those directions carry no data.
    for i in 0..n {
        let di = m[i * n + i];
        ws.scale[i] = if di > 0.0 { 1.0 / di.sqrt() } else { 0.0 };
    }
    for i in 0..n {
        for j in 0..n {
            ws.a[i * n + j] = m[i * n + j] * ws.scale[i] * ws.scale[j];
        }
    }

    // Fast path: unpivoted LDLᵀ on the equilibrated matrix, accepted only
    // when every pivot stays comfortably positive.
    ws.ldl.copy_from_slice(&ws.a);
    if ldl_solve_e1(&mut ws.ldl, n, &mut ws.y, out) {
        let s0 = ws.scale[0];
        for i in 0..n {
            out[i] *= ws.scale[i] * s0;
        }
        return true;
    }

    // Eigendecomposition of the equilibrated matrix.
    let ok = jacobi_inplace(&mut ws.a, &mut ws.v, &mut ws.d, &mut ws.b, &mut ws.z, n);
    debug_assert!(ok, "Jacobi failed to converge");
    let lmax = ws.d.iter().fold(0.0_f64, |acc, &l| acc.max(l.abs()));
    if lmax == 0.0 {
        out.fill(0.0);
        return false;
    }
    let full_rank = ws.d.iter().all(|&l| l > cutoff * lmax);
    if full_rank {
        let s0 = ws.scale[0];
        for i in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += ws.v[i * n + k] * ws.v[k] / ws.d[k];
            }
            out[i] = acc * ws.scale[i] * s0;
        }
        return true;
    }

    // Rank-deficient: pseudo-inverse with the cutoff, in the original
    // coordinates so that the implied solution is minimum-norm there.
    ws.a.copy_from_slice(m);
    let ok = jacobi_inplace(&mut ws.a, &mut ws.v, &mut ws.d, &mut ws.b, &mut ws.z, n);
    debug_assert!(ok, "Jacobi failed to converge");
    let lmax = ws.d.iter().fold(0.0_f64, |acc, &l| acc.max(l.abs()));
    if lmax == 0.0 {
        out.fill(0.0);
        return false;
    }
    for i in 0..n {
        let mut acc = 0.0;
        for k in 0..n {
            if ws.d[k].abs() > cutoff * lmax {
                acc += ws.v[i * n + k] * ws.v[k] / ws.d[k];
            }
        }
        out[i] = acc;
    }
    false
}

/// Reusable scratch space for [`solve_psd_first_column`]; one instance per
/// evaluation loop keeps the hot path allocation-free.
pub(crate) struct PsdSolveWorkspace {
    a: Vec<f64>,
    v: Vec<f64>,
    d: Vec<f64>,
    b: Vec<f64>,
    z: Vec<f64>,
    ldl: Vec<f64>,
    y: Vec<f64>,
    scale: Vec<f64>,
}

impl PsdSolveWorkspace {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            a: vec![0.0; n * n],
            v: vec![0.0; n * n],
            d: vec![0.0; n],
            b: vec![0.0; n],
            z: vec![0.0; n],
            ldl: vec![0.0; n * n],
            y: vec![0.0; n],
            scale: vec![0.0; n],
        }
    }
}

/// Unpivoted LDLᵀ factorization and solve against `e₁`, in place.
///
/// Returns `false` (leaving `out` unspecified) as soon as a pivot drops
/// below [`LDL_PIVOT_TOL`]; for a unit-diagonal PSD input that threshold
/// caps the condition number the factorization is trusted with.
fn ldl_solve_e1(a: &mut [f64], n: usize, y: &mut [f64], out: &mut [f64]) -> bool {
    // Factor: below the diagonal L (unit diagonal implicit), on it D.
    for k in 0..n {
        let mut dk = a[k * n + k];
        for j in 0..k {
            dk -= a[k * n + j] * a[k * n + j] * a[j * n + j];
        }
        if !(dk >= LDL_PIVOT_TOL) {
            return false;
        }
        a[k * n + k] = dk;
        for i in (k + 1)..n {
            let mut s = a[i * n + k];
            for j in 0..k {
                s -= a[i * n + j] * a[k * n + j] * a[j * n + j];
            }
            a[i * n + k] = s / dk;
        }
    }
    // Solve L y = e₁, then D, then Lᵀ.
    y[0] = 1.0;
    for i in 1..n {
        let mut s = 0.0;
        for j in 0..i {
            s -= a[i * n + j] * y[j];
        }
        y[i] = s;
    }
    for i in 0..n {
        y[i] /= a[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for j in (i + 1)..n {
            s -= a[j * n + i] * out[j];
        }
        out[i] = s;
    }
    true
}

/// Cyclic Jacobi diagonalization of the symmetric matrix packed row-major
/// in `a` (destroyed). On success `d` holds the eigenvalues and `v[i*n+k]`
/// component `i` of the eigenvector paired with `d[k]`. `b` and `z` are
/// scratch. Returns `false` only if the sweep limit is exhausted.
pub(crate) fn jacobi_inplace(
    a: &mut [f64],
    v: &mut [f64],
    d: &mut [f64],
    b: &mut [f64],
    z: &mut [f64],
    n: usize,
) -> bool {
    for i in 0..n {
        for j in 0..n {
            v[i * n + j] = if i == j { 1.0 } else { 0.0 };
        }
        d[i] = a[i * n + i];
        b[i] = d[i];
        z[i] = 0.0;
    }
    if n == 1 {
        return true;
    }
    for sweep in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for i in 0..n - 1 {
            for j in (i + 1)..n {
                off += a[i * n + j].abs();
            }
        }
        if off == 0.0 {
            return true;
        }
        // Early sweeps only rotate entries above a coarse threshold.
        let thresh = if sweep < 3 {
            0.2 * off / ((n * n) as f64)
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let g = 100.0 * apq.abs();
                // Skip rotations that can no longer change the eigenvalues.
                if sweep >= 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a[p * n + q] = 0.0;
                } else if apq.abs() > thresh {
                    let mut h = d[q] - d[p];
                    let t = if h.abs() + g == h.abs() {
                        apq / h
                    } else {
                        let theta = 0.5 * h / apq;
                        let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                        if theta < 0.0 {
                            t = -t;
                        }
                        t
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let tau = s / (1.0 + c);
                    h = t * apq;
                    z[p] -= h;
                    z[q] += h;
                    d[p] -= h;
                    d[q] += h;
                    a[p * n + q] = 0.0;
                    let rot = |x: &mut [f64], i1: usize, i2: usize| {
                        let g = x[i1];
                        let h = x[i2];
                        x[i1] = g - s * (h + g * tau);
                        x[i2] = h + s * (g - h * tau);
                    };
                    for j in 0..p {
                        rot(a, j * n + p, j * n + q);
                    }
                    for j in (p + 1)..q {
                        rot(a, p * n + j, j * n + q);
                    }
                    for j in (q + 1)..n {
                        rot(a, p * n + j, q * n + j);
                    }
                    for j in 0..n {
                        rot(v, j * n + p, j * n + q);
                    }
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RandomSource;

    const TOL: f64 = 1e-8;

    fn random_sym(n: usize, rs: &mut RandomSource) -> SymMatrix {
        SymMatrix::from_fn(n, |_, _| rs.uniform(-1.0, 1.0))
    }

    /// Independent oracle: dense inverse by Gauss–Jordan with partial
    /// pivoting, no shared code with the Jacobi path.
    fn gauss_jordan_inverse(m: &SymMatrix) -> Vec<Vec<f64>> {
        let n = m.dim();
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                let mut row: Vec<f64> = (0..n).map(|j| m.get(i, j)).collect();
                row.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
                row
            })
            .collect();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            a.swap(col, piv);
            let p = a[col][col];
            assert!(p.abs() > 1e-12, "oracle given a singular matrix");
            for j in 0..2 * n {
                a[col][j] /= p;
            }
            for i in 0..n {
                if i != col {
                    let f = a[i][col];
                    for j in 0..2 * n {
                        a[i][j] -= f * a[col][j];
                    }
                }
            }
        }
        a.into_iter().map(|row| row[n..].to_vec()).collect()
    }

    /// Independent oracle: determinant of M − λI by LU elimination.
    fn det_shifted(m: &SymMatrix, lambda: f64) -> f64 {
        let n = m.dim();
        let mut a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| m.get(i, j) - if i == j { lambda } else { 0.0 })
                    .collect()
            })
            .collect();
        let mut det = 1.0;
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            if piv != col {
                a.swap(col, piv);
                det = -det;
            }
            let p = a[col][col];
            if p == 0.0 {
                return 0.0;
            }
            det *= p;
            for i in col + 1..n {
                let f = a[i][col] / p;
                for j in col..n {
                    a[i][j] -= f * a[col][j];
                }
            }
        }
        det
    }

    #[test]
    fn pseudo_inverse_of_identity_is_identity() {
        let m = SymMatrix::identity(3);
        let p = pseudo_inverse(&m, 1e-12).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((p.get(i, j) - want).abs() < TOL);
            }
        }
    }

    #[test]
    fn pseudo_inverse_of_singular_diagonal() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 0, 2.0);
        let p = pseudo_inverse(&m, 1e-12).unwrap();
        assert!((p.get(0, 0) - 0.5).abs() < TOL);
        assert_eq!(p.get(1, 1), 0.0);
        assert_eq!(p.get(0, 1), 0.0);
    }

    #[test]
    fn pseudo_inverse_matches_gauss_jordan_on_spd() {
        let mut rs = RandomSource::new(42);
        for _ in 0..20 {
            let r = random_sym(4, &mut rs);
            // AᵀA + I is comfortably SPD.
            let spd = SymMatrix::from_fn(4, |i, j| {
                let mut s = if i == j { 1.0 } else { 0.0 };
                for k in 0..4 {
                    s += r.get(k, i) * r.get(k, j);
                }
                s
            });
            let inv = gauss_jordan_inverse(&spd);
            let p = pseudo_inverse(&spd, 1e-12).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert!(
                        (p.get(i, j) - inv[i][j]).abs() < TOL,
                        "entry ({i},{j}): {} vs oracle {}",
                        p.get(i, j),
                        inv[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn moore_penrose_identities_hold_for_rank_deficient_matrices() {
        let mut rs = RandomSource::new(7);
        for _ in 0..20 {
            // Rank-2 PSD matrix of dimension 4: sum of two outer products.
            let u: Vec<f64> = (0..4).map(|_| rs.uniform(-1.0, 1.0)).collect();
            let w: Vec<f64> = (0..4).map(|_| rs.uniform(-1.0, 1.0)).collect();
            let m = SymMatrix::from_fn(4, |i, j| u[i] * u[j] + w[i] * w[j]);
            let p = pseudo_inverse(&m, 1e-12).unwrap();
            let m_scale = (0..4)
                .map(|i| m.get(i, i))
                .fold(1.0_f64, |a, b| a.max(b.abs()));
            let p_scale = (0..4)
                .map(|i| p.get(i, i))
                .fold(1.0_f64, |a, b| a.max(b.abs()));
            // M P M = M and P M P = P, entrywise relative to each factor's scale.
            for i in 0..4 {
                for j in 0..4 {
                    let mut mpm = 0.0;
                    let mut pmp = 0.0;
                    for k in 0..4 {
                        for l in 0..4 {
                            mpm += m.get(i, k) * p.get(k, l) * m.get(l, j);
                            pmp += p.get(i, k) * m.get(k, l) * p.get(l, j);
                        }
                    }
                    assert!((mpm - m.get(i, j)).abs() < TOL * m_scale);
                    assert!((pmp - p.get(i, j)).abs() < TOL * p_scale);
                }
            }
        }
    }

    #[test]
    fn pseudo_inverse_rejects_non_finite() {
        let mut m = SymMatrix::zeros(2);
        m.set(0, 1, f64::NAN);
        assert!(matches!(
            pseudo_inverse(&m, 1e-12),
            Err(Error::InvalidMatrix)
        ));
    }

    #[test]
    fn min_eigenvalue_of_diagonal() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 0, 3.0);
        m.set(1, 1, 1.0);
        m.set(2, 2, 2.0);
        assert!((min_eigenvalue(&m).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn min_eigenvalue_of_two_by_two() {
        let m = SymMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        assert!((min_eigenvalue(&m).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn min_eigenvalue_matches_bisection_oracle() {
        let mut rs = RandomSource::new(2024);
        for _ in 0..10 {
            let m = random_sym(5, &mut rs);
            let got = min_eigenvalue(&m).unwrap();
            // Bisection on det(M − λI): the determinant of a symmetric matrix
            // changes sign exactly at eigenvalues; bracket the smallest one.
            let norm: f64 = (0..5)
                .map(|i| (0..5).map(|j| m.get(i, j).abs()).sum::<f64>())
                .fold(0.0, f64::max);
            let mut lo = -norm - 1.0;
            let mut hi = got + 1e-6; // just above the claimed smallest eigenvalue
            let sign_lo = det_shifted(&m, lo).signum();
            assert!(
                det_shifted(&m, hi).signum() != sign_lo,
                "determinant did not change sign across the smallest eigenvalue"
            );
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if det_shifted(&m, mid).signum() == sign_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let oracle = 0.5 * (lo + hi);
            assert!(
                (got - oracle).abs() < 1e-8,
                "min eigenvalue {got} vs bisection oracle {oracle}"
            );
        }
    }

    #[test]
    fn min_eigenvalue_is_a_rayleigh_lower_bound() {
        let mut rs = RandomSource::new(9);
        for _ in 0..10 {
            let m = random_sym(6, &mut rs);
            let lam = min_eigenvalue(&m).unwrap();
            for _ in 0..20 {
                let v: Vec<f64> = (0..6).map(|_| rs.uniform(-1.0, 1.0)).collect();
                let n2: f64 = v.iter().map(|x| x * x).sum();
                if n2 == 0.0 {
                    continue;
                }
                let mv = m.mul_vec(&v);
                let rayleigh = v.iter().zip(&mv).map(|(a, b)| a * b).sum::<f64>() / n2;
                assert!(lam <= rayleigh + 1e-10);
            }
        }
    }

    #[test]
    fn first_column_solve_agrees_with_pseudo_inverse() {
        let mut rs = RandomSource::new(5);
        for trial in 0..40 {
            let n = 2 + (trial % 4);
            // Mix of full-rank and rank-deficient PSD matrices.
            let rank = 1 + (trial % n);
            let mut m = SymMatrix::zeros(n);
            for _ in 0..rank {
                let u: Vec<f64> = (0..n).map(|_| rs.uniform(-1.0, 1.0)).collect();
                for i in 0..n {
                    for j in 0..n {
                        let v = m.get(i, j) + u[i] * u[j];
                        m.set(i, j, v);
                    }
                }
            }
            let p = pseudo_inverse(&m, DEFAULT_PINV_CUTOFF).unwrap();
            let mut ws = PsdSolveWorkspace::new(n);
            let mut out = vec![0.0; n];
            solve_psd_first_column(m.data(), n, DEFAULT_PINV_CUTOFF, &mut ws, &mut out);
            for i in 0..n {
                assert!(
                    (out[i] - p.get(i, 0)).abs() < 1e-7 * (1.0 + p.get(i, 0).abs()),
                    "component {i}: {} vs {}",
                    out[i],
                    p.get(i, 0)
                );
            }
        }
    }

    #[test]
    fn first_column_solve_handles_badly_scaled_full_rank_matrices() {
        // Diagonal scaling spanning 14 orders of magnitude: the raw
        // eigendecomposition path would truncate, the equilibrated solve
        // must not.
        let n = 4;
        let scales = [1.0, 1e-4, 1e-8, 1e-14];
        let m = SymMatrix::from_fn(n, |i, j| {
            let base = if i == j { 2.0 } else { 0.3 };
            base * scales[i] * scales[j]
        });
        let mut ws = PsdSolveWorkspace::new(n);
        let mut out = vec![0.0; n];
        let full = solve_psd_first_column(m.data(), n, DEFAULT_PINV_CUTOFF, &mut ws, &mut out);
        assert!(full, "equilibration should see a full-rank matrix");
        // Check B·out = e₁ in a relative sense per row.
        let prod = m.mul_vec(&out);
        for i in 0..n {
            let want = if i == 0 { 1.0 } else { 0.0 };
            assert!(
                (prod[i] - want).abs() < 1e-9 * (1.0 + scales[i]),
                "row {i}: {}",
                prod[i]
            );
        }
    }
}
