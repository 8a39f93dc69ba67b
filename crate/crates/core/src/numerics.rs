//! Small shared numerical utilities: bracketed root finding, quadrature with
//! endpoint regularization, and least-squares line / parabola fits.

use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] // provides f64 math in no_std builds; inherent std methods win under test
use num_traits::Float;

use crate::{CoreError, Result};

/// Bisect a bracketed sign change of `f` on `[lo, hi]` down to interval width
/// `xtol`. The bracket must satisfy `f(lo) * f(hi) <= 0`; the side with the
/// same sign as `f(lo)` is kept.
pub fn bisect<F: FnMut(f64) -> f64>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(CoreError::Regime(String::from(
            "bisect: no sign change on the bracket",
        )));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= xtol {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Midpoint rule on `[0, 1]` with `n` panels applied to an already
/// regularized integrand.
fn midpoint<F: FnMut(f64) -> f64>(f: &mut F, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        acc += f((i as f64 + 0.5) * h);
    }
    acc * h
}

/// Integrate `f` over `[a, b]` where `f` vanishes like a square root at both
/// endpoints (WKB phase integrands). The substitution `x = a + (b-a) sin^2 t`
/// with `t` on `[0, pi/2]` removes the derivative singularity of the inverse
/// problem and clusters points near the turning points. Panel count doubles
/// from 64 until the result changes by less than `rel_tol` relatively.
pub fn integrate_sqrt_endpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(b > a) {
        return Err(CoreError::Config(String::from(
            "integrate_sqrt_endpoints: requires b > a",
        )));
    }
    let width = b - a;
    let half_pi = core::f64::consts::FRAC_PI_2;
    // t runs over [0, 1], scaled internally to [0, pi/2]
    let mut g = |u: f64| {
        let t = u * half_pi;
        let (s, c) = t.sin_cos();
        let x = a + width * s * s;
        f(x) * 2.0 * width * s * c * half_pi
    };
    let mut n = 64usize;
    let mut prev = midpoint(&mut g, n);
    for _ in 0..14 {
        n *= 2;
        let cur = midpoint(&mut g, n);
        if (cur - prev).abs() <= rel_tol * cur.abs().max(1e-300) || (cur - prev).abs() < 1e-14 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(CoreError::Numeric(String::from(
        "integrate_sqrt_endpoints: no convergence under panel doubling",
    )))
}

/// Result of a least-squares straight-line fit y = slope x + intercept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination of the fit.
    pub r_squared: f64,
}

/// Least-squares straight line through `(x, y)` pairs.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(CoreError::Config(String::from(
            "fit_line: need two or more equal-length samples",
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
        syy += (yi - my) * (yi - my);
    }
    if sxx == 0.0 {
        return Err(CoreError::Numeric(String::from(
            "fit_line: degenerate abscissas",
        )));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Result of a least-squares quadratic fit y = c0 + c1 x + c2 x^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadFit {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    /// Root-mean-square residual of the fit.
    pub rms_residual: f64,
}

/// Least-squares parabola through `(x, y)` pairs via the 3x3 normal equations.
/// Abscissas are centered internally for conditioning.
pub fn fit_quadratic(x: &[f64], y: &[f64]) -> Result<QuadFit> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(CoreError::Config(String::from(
            "fit_quadratic: need three or more equal-length samples",
        )));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let xs: Vec<f64> = x.iter().map(|&v| v - mx).collect();
    let mut s = [0.0f64; 5];
    for &xi in &xs {
        let mut pw = 1.0;
        for sk in s.iter_mut() {
            *sk += pw;
            pw *= xi;
        }
    }
    let mut b = [0.0f64; 3];
    for (&xi, &yi) in xs.iter().zip(y.iter()) {
        b[0] += yi;
        b[1] += yi * xi;
        b[2] += yi * xi * xi;
    }
    let mut a = [
        [s[0], s[1], s[2]],
        [s[1], s[2], s[3]],
        [s[2], s[3], s[4]],
    ];
    // Gaussian elimination with partial pivoting on the 3x3 system.
    let mut bb = b;
    for col in 0..3 {
        let mut piv = col;
        for row in col + 1..3 {
            if a[row][col].abs() > a[piv][col].abs() {
                piv = row;
            }
        }
        if a[piv][col].abs() < 1e-300 {
            return Err(CoreError::Numeric(String::from(
                "fit_quadratic: singular normal equations",
            )));
        }
        a.swap(col, piv);
        bb.swap(col, piv);
        for row in col + 1..3 {
            let fac = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= fac * a[col][k];
            }
            bb[row] -= fac * bb[col];
        }
    }
    let mut c = [0.0f64; 3];
    for col in (0..3).rev() {
        let mut acc = bb[col];
        for k in col + 1..3 {
            acc -= a[col][k] * c[k];
        }
        c[col] = acc / a[col][col];
    }
    // Undo the centering: y = c0 + c1 (x - mx) + c2 (x - mx)^2.
    let c2 = c[2];
    let c1 = c[1] - 2.0 * c[2] * mx;
    let c0 = c[0] - c[1] * mx + c[2] * mx * mx;
    let mut ss = 0.0;
    for (&xi, &yi) in x.iter().zip(y.iter()) {
        let fit = c0 + c1 * xi + c2 * xi * xi;
        ss += (yi - fit) * (yi - fit);
    }
    Ok(QuadFit {
        c0,
        c1,
        c2,
        rms_residual: (ss / n).sqrt(),
    })
}
