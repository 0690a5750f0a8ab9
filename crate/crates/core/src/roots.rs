//! Polynomial roots in double precision.
//!
//! Eigenvalues of the companion matrix, refined by a few Newton steps and
//! snapped together when they agree to within [`CLUSTER_TOL`].

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Roots closer than this are treated as one root with multiplicity.
pub const CLUSTER_TOL: f64 = 1e-7;

fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of `Σ coeffs[k] z^k`, with multiplicity.
pub fn roots(coeffs: &[C64]) -> Result<Vec<C64>> {
    let deg = coeffs
        .iter()
        .rposition(|c| c.norm() != 0.0)
        .ok_or_else(|| Error::RootFinding("zero polynomial".into()))?;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let mut m = DMatrix::<C64>::zeros(deg, deg);
    for i in 1..deg {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..deg {
        m[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let eig = m
        .eigenvalues()
        .ok_or_else(|| Error::RootFinding("companion eigenvalues did not converge".into()))?;
    let poly = &coeffs[..=deg];
    let mut out: Vec<C64> = eig.iter().map(|&z| polish(poly, z)).collect();
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::RootFinding("non-finite root".into()));
    }
    cluster(&mut out);
    Ok(out)
}

fn polish(coeffs: &[C64], mut z: C64) -> C64 {
    let (mut val, _) = horner(coeffs, z);
    for _ in 0..20 {
        let (p, dp) = horner(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let next = z - p / dp;
        let (pn, _) = horner(coeffs, next);
        if pn.norm() >= val.norm() {
            break;
        }
        z = next;
        val = pn;
    }
    z
}

/// Replaces each group of nearby roots by the group mean.
fn cluster(zs: &mut [C64]) {
    let n = zs.len();
    let mut group = vec![usize::MAX; n];
    for i in 0..n {
        if group[i] != usize::MAX {
            continue;
        }
        group[i] = i;
        for j in i + 1..n {
            if group[j] == usize::MAX && (zs[i] - zs[j]).norm() < CLUSTER_TOL {
                group[j] = i;
            }
        }
    }
    for g in 0..n {
        let members: Vec<usize> = (0..n).filter(|&k| group[k] == g).collect();
        if members.len() > 1 {
            let mean = members.iter().map(|&k| zs[k]).sum::<C64>() / members.len() as f64;
            for k in members {
                zs[k] = mean;
            }
        }
    }
}
