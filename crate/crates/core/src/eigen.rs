//! Symmetric eigensolvers used throughout the crate.
//!
//! * implicit-shift QL iteration for symmetric tridiagonal matrices, with or
//!   without eigenvector accumulation (the classic tql2 algorithm),
//! * Sturm-sequence counting plus bisection for selected eigenvalues of a
//!   tridiagonal matrix in an energy window, with inverse iteration for the
//!   matching eigenvectors (fast path for in-gap bound states on long chains),
//! * Householder reduction (tred2) followed by QL for dense symmetric
//!   matrices (Bloch central equations, small Fock spaces),
//! * Lanczos iteration with full reorthogonalization for the lowest states of
//!   large sparse many-body Hamiltonians.
//!
//! All routines are deterministic: no randomized pivoting or starting vectors.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // provides f64 math in no_std builds; inherent std methods win under test
use num_traits::Float;

use crate::{CoreError, Result};

/// Dense column-major matrix of f64 (column k is contiguous).
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    /// Column j as a slice.
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let va = self.get(i, a);
            let vb = self.get(i, b);
            self.set(i, a, vb);
            self.set(i, b, va);
        }
    }

    /// Build from a list of equal-length columns.
    pub fn from_columns(columns: &[Vec<f64>]) -> Result<Self> {
        if columns.is_empty() {
            return Ok(Mat::zeros(0, 0));
        }
        let rows = columns[0].len();
        if columns.iter().any(|c| c.len() != rows) {
            return Err(CoreError::Config(String::from(
                "from_columns: ragged column lengths",
            )));
        }
        let mut m = Mat::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            m.col_mut(j).copy_from_slice(c);
        }
        Ok(m)
    }
}

fn hypot(a: f64, b: f64) -> f64 {
    let (a, b) = (a.abs(), b.abs());
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        0.0
    } else {
        let r = lo / hi;
        hi * (1.0 + r * r).sqrt()
    }
}

fn copysign(mag: f64, sgn: f64) -> f64 {
    if sgn >= 0.0 {
        mag.abs()
    } else {
        -mag.abs()
    }
}

/// Implicit-shift QL sweeps on a symmetric tridiagonal matrix.
/// `d` holds the diagonal, `e` the subdiagonal in `e[0..n-1]` with `e[n-1]`
/// scratch. If `z` is given, the rotations are accumulated into it so that on
/// entry `z = I` yields eigenvectors as columns (or `z = Q` from a Householder
/// reduction yields the dense eigenvectors).
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Mat>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    debug_assert_eq!(e.len(), n);
    for l in 0..n {
        let mut sweeps = 0usize;
        loop {
            // locate the first negligible subdiagonal element at or after l
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > 60 {
                return Err(CoreError::Numeric(format!(
                    "tridiagonal QL did not converge at index {} after 60 sweeps",
                    l
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + copysign(r, g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    // rotation annihilated prematurely; restart the sweep
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(zz) = z.as_deref_mut() {
                    let rows = zz.rows();
                    for k in 0..rows {
                        f = zz.get(k, i + 1);
                        zz.set(k, i + 1, s * zz.get(k, i) + c * f);
                        zz.set(k, i, c * zz.get(k, i) - s * f);
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn sort_pairs(d: &mut [f64], z: Option<&mut Mat>) {
    let n = d.len();
    match z {
        None => d.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal)),
        Some(z) => {
            // selection sort keeping eigenvector columns attached
            for i in 0..n {
                let mut k = i;
                for j in i + 1..n {
                    if d[j] < d[k] {
                        k = j;
                    }
                }
                if k != i {
                    d.swap(i, k);
                    z.swap_cols(i, k);
                }
            }
        }
    }
}

/// Full eigendecomposition of a symmetric tridiagonal matrix. Returns the
/// ascending eigenvalues and the orthonormal eigenvectors as matrix columns.
pub fn eigh_tridiagonal(diagonal: &[f64], off_diagonal: &[f64]) -> Result<(Vec<f64>, Mat)> {
    let n = diagonal.len();
    if n == 0 || off_diagonal.len() + 1 != n {
        return Err(CoreError::Config(String::from(
            "eigh_tridiagonal: off-diagonal length must be n - 1",
        )));
    }
    let mut d = diagonal.to_vec();
    let mut e = off_diagonal.to_vec();
    e.push(0.0);
    let mut z = Mat::identity(n);
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    sort_pairs(&mut d, Some(&mut z));
    Ok((d, z))
}

/// Eigenvalues only of a symmetric tridiagonal matrix, ascending.
pub fn eigvalsh_tridiagonal(diagonal: &[f64], off_diagonal: &[f64]) -> Result<Vec<f64>> {
    let n = diagonal.len();
    if n == 0 || off_diagonal.len() + 1 != n {
        return Err(CoreError::Config(String::from(
            "eigvalsh_tridiagonal: off-diagonal length must be n - 1",
        )));
    }
    let mut d = diagonal.to_vec();
    let mut e = off_diagonal.to_vec();
    e.push(0.0);
    ql_implicit(&mut d, &mut e, None)?;
    sort_pairs(&mut d, None);
    Ok(d)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`
/// (Sturm sequence sign count).
pub fn sturm_count(diagonal: &[f64], off_diagonal: &[f64], x: f64) -> usize {
    let n = diagonal.len();
    let mut count = 0usize;
    let mut q = 1.0f64;
    for i in 0..n {
        let esq = if i == 0 {
            0.0
        } else {
            off_diagonal[i - 1] * off_diagonal[i - 1]
        };
        let denom = if q != 0.0 { q } else { 1e-300 };
        q = diagonal[i] - x - esq / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues in the open window `(lo, hi)`, each bisected to absolute
/// tolerance `tol` using Sturm counts. Cost is O(N log) per eigenvalue, no
/// full decomposition.
pub fn eigenvalues_in_window(
    diagonal: &[f64],
    off_diagonal: &[f64],
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    if !(hi > lo) {
        return Err(CoreError::Config(String::from(
            "eigenvalues_in_window: needs hi > lo",
        )));
    }
    let k_lo = sturm_count(diagonal, off_diagonal, lo);
    let k_hi = sturm_count(diagonal, off_diagonal, hi);
    let mut out = Vec::with_capacity(k_hi.saturating_sub(k_lo));
    for k in k_lo..k_hi {
        // bisect for the (k+1)-th smallest eigenvalue inside (lo, hi)
        let mut a = lo;
        let mut b = hi;
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if sturm_count(diagonal, off_diagonal, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    Ok(out)
}

/// Tridiagonal LU factorization with partial pivoting (fill-in in a second
/// superdiagonal), used by inverse iteration near a shifted eigenvalue.
struct TridiagLu {
    dl: Vec<f64>,
    dd: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    pivoted: Vec<bool>,
}

fn factor_shifted(diagonal: &[f64], off_diagonal: &[f64], shift: f64) -> TridiagLu {
    let n = diagonal.len();
    let mut dl: Vec<f64> = off_diagonal.to_vec();
    let mut dd: Vec<f64> = diagonal.iter().map(|&v| v - shift).collect();
    let mut du: Vec<f64> = off_diagonal.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut pivoted = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if dd[i].abs() >= dl[i].abs() {
            // no pivot
            let d = if dd[i] != 0.0 { dd[i] } else { 1e-300 };
            let fac = dl[i] / d;
            dl[i] = fac;
            dd[i + 1] -= fac * du[i];
            if i + 2 < n {
                // du2 stays zero in the unpivoted step
            }
        } else {
            // swap rows i and i+1
            let fac = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = fac;
            let tmp = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = tmp - fac * dd[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fac * du[i + 1];
            }
            pivoted[i] = true;
        }
    }
    if n > 0 && dd[n - 1] == 0.0 {
        dd[n - 1] = 1e-300;
    }
    TridiagLu { dl, dd, du, du2, pivoted }
}

impl TridiagLu {
    fn solve_in_place(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n.saturating_sub(1) {
            if self.pivoted[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.dl[i] * b[i];
        }
        // back substitution
        if n == 0 {
            return;
        }
        b[n - 1] /= self.dd[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.dd[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.dd[i];
        }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|&x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Eigenvector of an isolated eigenvalue by inverse iteration with a pivoted
/// tridiagonal solve. The eigenvalue estimate should be accurate to a few
/// ulps times the matrix norm (from [`eigenvalues_in_window`]).
pub fn inverse_iteration_vector(
    diagonal: &[f64],
    off_diagonal: &[f64],
    eigenvalue: f64,
) -> Result<Vec<f64>> {
    let n = diagonal.len();
    if n == 0 || off_diagonal.len() + 1 != n {
        return Err(CoreError::Config(String::from(
            "inverse_iteration_vector: off-diagonal length must be n - 1",
        )));
    }
    let lu = factor_shifted(diagonal, off_diagonal, eigenvalue);
    // deterministic generic start vector
    let mut v: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * (1.618_033_988_75 * (i as f64 + 1.0)).sin())
        .collect();
    normalize(&mut v);
    let mut residual = f64::INFINITY;
    for _ in 0..8 {
        lu.solve_in_place(&mut v);
        let growth = normalize(&mut v);
        if growth == 0.0 {
            return Err(CoreError::Numeric(String::from(
                "inverse iteration collapsed to the zero vector",
            )));
        }
        // residual ||(T - E) v|| = 1/growth for the normalized iterate
        residual = 1.0 / growth;
        if residual < 1e-11 * (1.0 + eigenvalue.abs()) {
            return Ok(v);
        }
    }
    if residual < 1e-7 * (1.0 + eigenvalue.abs()) {
        Ok(v)
    } else {
        Err(CoreError::Numeric(format!(
            "inverse iteration stalled with residual {:e}",
            residual
        )))
    }
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form with
/// accumulated transformations (tred2). `a` is destroyed and replaced by the
/// orthogonal matrix Q; `d` receives the diagonal and `e` the subdiagonal
/// (with e[0] scratch, couplings in e[1..n] between i-1 and i).
fn tred2(a: &mut Mat, d: &mut [f64], e: &mut [f64]) {
    let n = a.rows();
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a.get(i, k).abs();
            }
            if scale == 0.0 {
                e[i] = a.get(i, l);
            } else {
                for k in 0..=l {
                    let v = a.get(i, k) / scale;
                    a.set(i, k, v);
                    h += v * v;
                }
                let mut f = a.get(i, l);
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a.set(i, l, f - g);
                f = 0.0;
                for j in 0..=l {
                    a.set(j, i, a.get(i, j) / h);
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a.get(j, k) * a.get(i, k);
                    }
                    for k in j + 1..=l {
                        g += a.get(k, j) * a.get(i, k);
                    }
                    e[j] = g / h;
                    f += e[j] * a.get(i, j);
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a.get(i, j);
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let v = a.get(j, k) - f * e[k] - g * a.get(i, k);
                        a.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = a.get(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += a.get(i, k) * a.get(k, j);
                }
                for k in 0..i {
                    let v = a.get(k, j) - g * a.get(k, i);
                    a.set(k, j, v);
                }
            }
        }
        d[i] = a.get(i, i);
        a.set(i, i, 1.0);
        for j in 0..i {
            a.set(j, i, 0.0);
            a.set(i, j, 0.0);
        }
    }
}

/// Full eigendecomposition of a dense symmetric matrix (upper/lower parts
/// must agree). Returns ascending eigenvalues and orthonormal eigenvector
/// columns.
pub fn eigh_dense(matrix: &Mat) -> Result<(Vec<f64>, Mat)> {
    let n = matrix.rows();
    if matrix.cols() != n {
        return Err(CoreError::Config(String::from(
            "eigh_dense: matrix must be square",
        )));
    }
    if n == 0 {
        return Ok((Vec::new(), Mat::zeros(0, 0)));
    }
    let mut a = matrix.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut a, &mut d, &mut e);
    // shift the subdiagonal into the e[0..n-1] layout used by ql_implicit
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    ql_implicit(&mut d, &mut e, Some(&mut a))?;
    sort_pairs(&mut d, Some(&mut a));
    Ok((d, a))
}

/// Lowest Ritz pairs of a large symmetric operator given through its
/// matrix-vector product, via Lanczos iteration with full
/// reorthogonalization (no ghost eigenvalues). Returns `n_lowest` ascending
/// Ritz values and the matching Ritz vectors as matrix columns.
pub fn lanczos_lowest<F: FnMut(&[f64], &mut [f64])>(
    dim: usize,
    mut matvec: F,
    n_lowest: usize,
    max_iter: usize,
) -> Result<(Vec<f64>, Mat)> {
    if dim == 0 || n_lowest == 0 {
        return Err(CoreError::Config(String::from(
            "lanczos_lowest: empty problem",
        )));
    }
    let m_max = max_iter.min(dim);
    if m_max < n_lowest {
        return Err(CoreError::Config(String::from(
            "lanczos_lowest: max_iter below the number of requested states",
        )));
    }
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m_max);
    let mut alpha: Vec<f64> = Vec::with_capacity(m_max);
    let mut beta: Vec<f64> = Vec::with_capacity(m_max);
    let mut v: Vec<f64> = (0..dim)
        .map(|i| 1.0 + 0.5 * (1.618_033_988_75 * (i as f64 + 1.0)).sin())
        .collect();
    normalize(&mut v);
    let mut w = vec![0.0; dim];
    for j in 0..m_max {
        matvec(&v, &mut w);
        if j > 0 {
            let b = beta[j - 1];
            let prev = &basis[j - 1];
            for (wi, pi) in w.iter_mut().zip(prev.iter()) {
                *wi -= b * pi;
            }
        }
        let a: f64 = w.iter().zip(v.iter()).map(|(&x, &y)| x * y).sum();
        alpha.push(a);
        for (wi, vi) in w.iter_mut().zip(v.iter()) {
            *wi -= a * vi;
        }
        basis.push(v.clone());
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for q in basis.iter() {
                let overlap: f64 = w.iter().zip(q.iter()).map(|(&x, &y)| x * y).sum();
                if overlap != 0.0 {
                    for (wi, qi) in w.iter_mut().zip(q.iter()) {
                        *wi -= overlap * qi;
                    }
                }
            }
        }
        let b = w.iter().map(|&x| x * x).sum::<f64>().sqrt();
        if b < 1e-13 || j + 1 == m_max {
            break;
        }
        beta.push(b);
        v.clear();
        v.extend(w.iter().map(|&x| x / b));
    }
    let m = alpha.len();
    if m < n_lowest {
        return Err(CoreError::Numeric(String::from(
            "lanczos_lowest: Krylov space exhausted before enough states converged",
        )));
    }
    let (ritz_vals, ritz_vecs) = eigh_tridiagonal(&alpha, &beta[..m - 1])?;
    let keep = n_lowest.min(m);
    let mut vectors = Mat::zeros(dim, keep);
    for k in 0..keep {
        let col = ritz_vecs.col(k);
        let out = vectors.col_mut(k);
        for (j, q) in basis.iter().enumerate() {
            let cjk = col[j];
            if cjk != 0.0 {
                for (oi, qi) in out.iter_mut().zip(q.iter()) {
                    *oi += cjk * qi;
                }
            }
        }
        normalize(out);
    }
    Ok((ritz_vals[..keep].to_vec(), vectors))
}
