//! Approximant (order) bases and minimal matrix generators.

use crate::error::{Error, NonGenericReason, Result};
use crate::field::FieldElement;
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polymat::{popov, popov_from_weak, PolyMatrix, Shift, Var};

/// Shifted Popov basis of `{p in K[v]^m : p^T F = 0 mod v^order}` for an
/// `m x n` matrix `F`.
///
/// The engine is the iterative one: for each order `k` and each column of
/// `F`, the basis column of smallest defect with a nonzero residual becomes
/// the pivot, clears the residual of the others, and is multiplied by `v`.
pub fn approximant_basis(f: &PolyMatrix, order: usize, shift: &Shift) -> Result<PolyMatrix> {
    popov_from_weak(&weak_approximant_basis(f, order, shift)?, shift)
}

/// Same module as [`approximant_basis`], in shifted weak Popov form with
/// diagonal pivots (the raw output of the iteration).
fn weak_approximant_basis(f: &PolyMatrix, order: usize, shift: &Shift) -> Result<PolyMatrix> {
    let (m, n) = (f.rows(), f.cols());
    if shift.len() != m {
        return Err(Error::DimMismatch(format!("shift of length {} for {m} rows", shift.len())));
    }
    if order == 0 {
        return Err(Error::BadParameters("approximant order must be positive".into()));
    }
    let fld = f.field();
    // basis[j][i]: coefficients of entry (i, j); res[j][c]: residual series
    let mut basis: Vec<Vec<Vec<FieldElement>>> = (0..m)
        .map(|j| (0..m).map(|i| if i == j { vec![1] } else { Vec::new() }).collect())
        .collect();
    let mut res: Vec<Vec<Vec<FieldElement>>> = (0..m)
        .map(|j| {
            (0..n)
                .map(|c| {
                    let mut v = f.get(j, c).truncate(order).into_coeffs();
                    v.resize(order, 0);
                    v
                })
                .collect()
        })
        .collect();
    let mut defect: Vec<i64> = shift.0.clone();

    for k in 0..order {
        for c in 0..n {
            let live: Vec<usize> = (0..m).filter(|&j| res[j][c][k] != 0).collect();
            let Some(&piv) = live.iter().min_by_key(|&&j| (defect[j], j)) else {
                continue;
            };
            let inv = fld.inv(res[piv][c][k])?;
            let (pb, pr) = (basis[piv].clone(), res[piv].clone());
            for &j in live.iter().filter(|&&j| j != piv) {
                let coef = fld.mul(res[j][c][k], inv);
                for (dst, src) in basis[j].iter_mut().zip(&pb) {
                    if dst.len() < src.len() {
                        dst.resize(src.len(), 0);
                    }
                    for (d, &s) in dst.iter_mut().zip(src) {
                        *d = fld.sub(*d, fld.mul(coef, s));
                    }
                }
                for (dst, src) in res[j].iter_mut().zip(&pr) {
                    for t in k..order {
                        dst[t] = fld.sub(dst[t], fld.mul(coef, src[t]));
                    }
                }
            }
            for e in basis[piv].iter_mut() {
                if !e.is_empty() {
                    e.insert(0, 0);
                }
            }
            for r in res[piv].iter_mut() {
                r.pop();
                r.insert(0, 0);
            }
            defect[piv] += 1;
        }
    }
    // a column's shifted degree equals its defect, reached first at its own row
    Ok(PolyMatrix::from_fn(fld, m, m, f.var(), |i, j| Poly::new(fld, basis[j][i].clone())))
}

/// A minimal right generator of a matrix sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    /// Popov matrix over `y`; columns `r(y) = sum r_t y^t` satisfy
    /// `sum_t H_{k+t} r_t = 0` on the available range of `k`.
    pub matrix: PolyMatrix,
    /// Set when the sequence was identically zero (the matrix is the identity).
    pub degenerate: bool,
}

/// Minimal generator of `H_0, ..., H_{sigma-1}` (square constant matrices),
/// read off the approximant basis of `[H(y)^T; -I]` at order `sigma`.
pub fn matrix_generator(h: &[Matrix]) -> Result<Generator> {
    let sigma = h.len();
    if sigma < 2 {
        return Err(Error::BadParameters("matrix generator needs at least two terms".into()));
    }
    let mu = h[0].rows();
    let fld = h[0].field();
    if h.iter().any(|m| m.rows() != mu || m.cols() != mu) {
        return Err(Error::DimMismatch("sequence terms must be square of equal size".into()));
    }
    if h.iter().all(|m| (0..mu).all(|i| m.row(i).iter().all(|&c| c == 0))) {
        return Ok(Generator { matrix: PolyMatrix::identity(fld, mu, Var::Y), degenerate: true });
    }
    let stacked = PolyMatrix::from_fn(fld, 2 * mu, mu, Var::Y, |i, c| {
        if i < mu {
            Poly::new(fld, h.iter().map(|hk| hk[(c, i)]).collect())
        } else if i - mu == c {
            Poly::constant(fld, fld.neg(1))
        } else {
            Poly::zero(fld)
        }
    });
    let p = weak_approximant_basis(&stacked, sigma, &Shift::zero(2 * mu))?;
    let mut r = PolyMatrix::zero(fld, mu, mu, Var::Y);
    for j in 0..mu {
        let dj = p.get(j, j).degree().ok_or(Error::SingularBasis)?;
        for i in 0..mu {
            r.set(i, j, p.get(i, j).reverse(dj)?);
        }
        if !generates_column(h, &r, j, dj) {
            return Err(Error::NonGeneric(NonGenericReason::MBasisCertificate("matrix generator")));
        }
    }
    Ok(Generator { matrix: popov(&r, &Shift::zero(mu))?, degenerate: false })
}

fn generates_column(h: &[Matrix], r: &PolyMatrix, j: usize, deg: usize) -> bool {
    let fld = r.field();
    let mu = r.rows();
    (0..h.len().saturating_sub(deg)).all(|k| {
        (0..mu).all(|row| {
            let mut s = 0;
            for t in 0..=deg {
                for i in 0..mu {
                    s = fld.add(s, fld.mul(h[k + t][(row, i)], r.get(i, j).coeff(t)));
                }
            }
            s == 0
        })
    })
}
