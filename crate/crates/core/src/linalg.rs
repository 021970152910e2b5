//! Dense Gaussian elimination over Q on spans of polynomials.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::superpoly::{Monomial, Scalar, SuperPoly};

/// Reduced row-echelon data for the span of a list of polynomials.
struct Echelon {
    /// pivot rows: (pivot monomial, row over monomials, combination over inputs)
    rows: Vec<(Monomial, BTreeMap<Monomial, Scalar>, Vec<Scalar>)>,
    n: usize,
}

impl Echelon {
    fn new(n: usize) -> Self {
        Echelon { rows: Vec::new(), n }
    }

    /// Reduces `v` against the current pivots; returns the remainder and the
    /// combination of inputs that was subtracted.
    fn reduce(&self, v: &SuperPoly, mut comb: Vec<Scalar>) -> (BTreeMap<Monomial, Scalar>, Vec<Scalar>) {
        let mut rem: BTreeMap<Monomial, Scalar> = v.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        for (pm, row, rc) in &self.rows {
            let Some(c) = rem.get(pm).cloned() else { continue };
            for (m, a) in row {
                let e = rem.entry(m.clone()).or_insert_with(Scalar::zero);
                *e -= &c * a;
                if e.is_zero() {
                    rem.remove(m);
                }
            }
            for (acc, r) in comb.iter_mut().zip(rc) {
                *acc -= &c * r;
            }
        }
        (rem, comb)
    }

    /// Adds input `i`; returns the kernel relation if it was dependent.
    fn push(&mut self, i: usize, v: &SuperPoly) -> Option<Vec<Scalar>> {
        let mut unit = vec![Scalar::zero(); self.n];
        unit[i] = Scalar::from_integer(1.into());
        let (rem, comb) = self.reduce(v, unit);
        let Some((pm, pc)) = rem.iter().next().map(|(m, c)| (m.clone(), c.clone())) else {
            return Some(comb);
        };
        let row: BTreeMap<Monomial, Scalar> = rem.into_iter().map(|(m, c)| (m, c / &pc)).collect();
        let rc: Vec<Scalar> = comb.into_iter().map(|c| c / &pc).collect();
        // keep rows fully reduced against the new pivot
        for (_, r, c) in self.rows.iter_mut() {
            if let Some(f) = r.get(&pm).cloned() {
                for (m, a) in &row {
                    let e = r.entry(m.clone()).or_insert_with(Scalar::zero);
                    *e -= &f * a;
                    if e.is_zero() {
                        r.remove(m);
                    }
                }
                for (x, y) in c.iter_mut().zip(&rc) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((pm, row, rc));
        None
    }
}

/// Coefficients `c` with `Σ c_i span[i] = v`, if `v` lies in the span.
pub fn solve_combination(span: &[SuperPoly], v: &SuperPoly) -> Option<Vec<Scalar>> {
    let n = span.len();
    let mut ech = Echelon::new(n);
    for (i, s) in span.iter().enumerate() {
        ech.push(i, s);
    }
    let (rem, comb) = ech.reduce(v, vec![Scalar::zero(); n]);
    if rem.is_empty() {
        Some(comb.into_iter().map(|c| -c).collect())
    } else {
        None
    }
}

/// A basis of `{ Σ c_i domain[i] : Σ c_i image[i] = 0 }`.
pub fn kernel_of(domain: &[SuperPoly], image: &[SuperPoly]) -> Vec<SuperPoly> {
    assert_eq!(domain.len(), image.len());
    let n = domain.len();
    let mut ech = Echelon::new(n);
    let mut out = Vec::new();
    for (i, w) in image.iter().enumerate() {
        if let Some(rel) = ech.push(i, w) {
            let d = domain[0].dim();
            let mut k = SuperPoly::zero(d);
            for (c, x) in rel.iter().zip(domain) {
                if !c.is_zero() {
                    k.axpy(c, x);
                }
            }
            if !k.is_zero() {
                out.push(k);
            }
        }
    }
    out
}

/// Rank of the span.
pub fn rank(span: &[SuperPoly]) -> usize {
    let mut ech = Echelon::new(span.len());
    for (i, s) in span.iter().enumerate() {
        ech.push(i, s);
    }
    ech.rows.len()
}
