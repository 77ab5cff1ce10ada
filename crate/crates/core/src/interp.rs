//! Multipoint evaluation and interpolation via subproduct trees.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::Poly;

/// At or below this many points the quadratic Horner/Lagrange paths are used.
pub const NAIVE_POINTS: usize = 16;

/// Levels of products `prod (x - x_i)` over dyadic blocks; `levels[0]` holds
/// the linear factors and the last level the full product.
struct SubproductTree {
    levels: Vec<Vec<Poly>>,
}

impl SubproductTree {
    fn new(field: Field, points: &[FieldElement]) -> Self {
        let leaves: Vec<Poly> = points
            .iter()
            .map(|&x| Poly::new(field, vec![field.neg(x), 1]))
            .collect();
        let mut levels = vec![leaves];
        while levels.last().unwrap().len() > 1 {
            let prev = levels.last().unwrap();
            let next = prev
                .chunks(2)
                .map(|c| if c.len() == 2 { &c[0] * &c[1] } else { c[0].clone() })
                .collect();
            levels.push(next);
        }
        SubproductTree { levels }
    }

    fn root(&self) -> &Poly {
        &self.levels.last().unwrap()[0]
    }

    fn eval(&self, u: &Poly) -> Vec<FieldElement> {
        let top = self.levels.len() - 1;
        let mut rems = vec![u.rem(self.root()).expect("nonzero tree node")];
        for lvl in (0..top).rev() {
            let nodes = &self.levels[lvl];
            let mut next = Vec::with_capacity(nodes.len());
            for (i, r) in rems.iter().enumerate() {
                for node in nodes.iter().skip(2 * i).take(2) {
                    next.push(r.rem(node).expect("nonzero tree node"));
                }
            }
            rems = next;
        }
        rems.into_iter().map(|r| r.coeff(0)).collect()
    }

    /// `sum_i c_i * prod_{j != i} (x - x_j)`.
    fn linear_combination(&self, c: &[FieldElement]) -> Poly {
        let field = self.root().field();
        let mut cur: Vec<Poly> = c.iter().map(|&v| Poly::constant(field, v)).collect();
        for lvl in 0..self.levels.len() - 1 {
            let nodes = &self.levels[lvl];
            cur = cur
                .chunks(2)
                .enumerate()
                .map(|(i, pair)| {
                    if pair.len() == 2 {
                        &(&pair[0] * &nodes[2 * i + 1]) + &(&pair[1] * &nodes[2 * i])
                    } else {
                        pair[0].clone()
                    }
                })
                .collect();
        }
        cur.pop().unwrap()
    }
}

fn check_distinct(points: &[FieldElement]) -> Result<()> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(Error::DuplicateAbscissa(w[0])),
        None => Ok(()),
    }
}

/// `u(x_i)` for every point.
pub fn multipoint_eval(u: &Poly, points: &[FieldElement]) -> Vec<FieldElement> {
    let field = u.field();
    let points: Vec<FieldElement> = points.iter().map(|&x| field.elem(x)).collect();
    if points.len() <= NAIVE_POINTS || u.len() <= NAIVE_POINTS {
        return points.iter().map(|&x| u.eval(x)).collect();
    }
    SubproductTree::new(field, &points).eval(u)
}

/// The unique polynomial of degree `< points.len()` through the given pairs.
pub fn interpolate(field: Field, points: &[FieldElement], values: &[FieldElement]) -> Result<Poly> {
    if points.len() != values.len() {
        return Err(Error::DimMismatch(format!(
            "{} points, {} values",
            points.len(),
            values.len()
        )));
    }
    let points: Vec<FieldElement> = points.iter().map(|&x| field.elem(x)).collect();
    let values: Vec<FieldElement> = values.iter().map(|&x| field.elem(x)).collect();
    check_distinct(&points)?;
    if points.is_empty() {
        return Ok(Poly::zero(field));
    }
    if points.len() <= NAIVE_POINTS {
        return Ok(lagrange(field, &points, &values));
    }
    let tree = SubproductTree::new(field, &points);
    let weights = tree.eval(&tree.root().derivative());
    let c: Vec<FieldElement> = values
        .iter()
        .zip(&weights)
        .map(|(&v, &w)| field.mul(v, field.inv(w).expect("distinct points")))
        .collect();
    Ok(tree.linear_combination(&c))
}

fn lagrange(field: Field, points: &[FieldElement], values: &[FieldElement]) -> Poly {
    let mut acc = Poly::zero(field);
    for (i, (&xi, &yi)) in points.iter().zip(values).enumerate() {
        let mut basis = Poly::one(field);
        let mut denom = 1;
        for (j, &xj) in points.iter().enumerate() {
            if i != j {
                basis = &basis * &Poly::new(field, vec![field.neg(xj), 1]);
                denom = field.mul(denom, field.sub(xi, xj));
            }
        }
        let c = field.mul(yi, field.inv(denom).expect("distinct points"));
        acc = &acc + &basis.scale(c);
    }
    acc
}

/// `prod (x - x_i)`.
pub fn vanishing_poly(field: Field, points: &[FieldElement]) -> Poly {
    if points.is_empty() {
        return Poly::one(field);
    }
    let points: Vec<FieldElement> = points.iter().map(|&x| field.elem(x)).collect();
    SubproductTree::new(field, &points).root().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_evaluates_to_itself() {
        let f = Field::p998();
        let c = Poly::constant(f, 42);
        let pts: Vec<u64> = (0..40).collect();
        assert!(multipoint_eval(&c, &pts).iter().all(|&v| v == 42));
    }

    #[test]
    fn interpolate_line() {
        let f = Field::new(7).unwrap();
        let p = interpolate(f, &[0, 1], &[1, 2]).unwrap();
        assert_eq!(p, Poly::new(f, vec![1, 1]));
    }

    #[test]
    fn duplicates_rejected() {
        let f = Field::new(7).unwrap();
        assert_eq!(interpolate(f, &[3, 1, 3], &[0, 0, 0]), Err(Error::DuplicateAbscissa(3)));
    }

    #[test]
    fn round_trip_33_points() {
        let f = Field::p998();
        let pts: Vec<u64> = (0..33).map(|i| i * i * 7 + 3 * i + 1).collect();
        let vals: Vec<u64> = (0..33).map(|i| (i * 1_000_003) % 998244353).collect();
        let p = interpolate(f, &pts, &vals).unwrap();
        assert!(p.len() <= 33);
        assert_eq!(multipoint_eval(&p, &pts), vals);
    }

    #[test]
    fn tree_eval_matches_horner() {
        let f = Field::goldilocks();
        let u = Poly::new(f, (0..100).map(|i| i * 31 + 5).collect());
        let pts: Vec<u64> = (0..64).map(|i| i * 12345 + 17).collect();
        let naive: Vec<u64> = pts.iter().map(|&x| u.eval(x)).collect();
        assert_eq!(multipoint_eval(&u, &pts), naive);
    }
}
