//! The Euler-homotopy contraction `K` and the homotopy data `(H, p, ι)` that
//! retract each field complex onto its cohomology.
//!
//! `K` is the Euler homotopy of the polynomial de Rham complex carried over to
//! polyvectors by `∨Ω`: on a form term of form degree `p` and coefficient
//! degree `q` with `p + q > 0` it is `(1/(p+q)) ι_E`, `E = Σ x_i ∂/∂x_i`.
//! With the sign `(−1)^j` on ξ-degree `j` this gives `ΔK + KΔ = id` on
//! PV^j for `j ≤ d−1`, and `KΔ = id − (constant part)` on PV^d.

use serde::Serialize;

use crate::complexes::{Complex, DescendantField, SummandIndex, Tower, Variant};
use crate::error::Result;
use crate::pvcalc::{divergence, vee_omega, vee_omega_inv, HolomorphicForm, PolyVector};
use crate::superpoly::{frac, int, random_poly, sign, Scalar, SuperPoly};

fn euler_homotopy(omega: &HolomorphicForm) -> HolomorphicForm {
    let p = &omega.0;
    let d = p.dim();
    let mut out = SuperPoly::zero(d);
    for (m, c) in p.terms() {
        let weight = m.xi_degree() as i64 + m.x_degree() as i64;
        if weight == 0 {
            continue;
        }
        let term = SuperPoly::monomial(m.clone(), c * frac(1, weight));
        for i in 1..=d {
            let contracted = term.d_odd(i).expect("index in range");
            if contracted.is_zero() {
                continue;
            }
            out = out
                .add(&SuperPoly::x(d, i).mul(&contracted).expect("same dim"))
                .expect("same dim");
        }
    }
    HolomorphicForm(out)
}

/// The operator `K`, raising ξ-degree by one. Zero on PV^d.
pub fn contraction_k(mu: &PolyVector) -> PolyVector {
    let d = mu.dim();
    let mut out = SuperPoly::zero(d);
    for j in mu.xi_degrees() {
        if j == d {
            continue;
        }
        let part = vee_omega_inv(&euler_homotopy(&vee_omega(&mu.xi_component(j))));
        out = out.add(&part.scale(&sign(j % 2 == 1))).expect("same dim");
    }
    out
}

/// `μ ↦ μ − KΔμ`, the divergence-free part relative to the K-splitting.
pub fn closed_part(mu: &PolyVector) -> PolyVector {
    mu.sub(&contraction_k(&divergence(mu))).expect("same dim")
}

/// The part of `μ ∈ PV^d` proportional to `ξ_1 ⋯ ξ_d`.
#[cfg(test)]
fn top_constant_part(mu: &PolyVector) -> PolyVector {
    let d = mu.dim();
    SuperPoly::monomial(crate::superpoly::Monomial::top(d), mu.top_constant())
}

/// The three maps of a deformation retract, with `pι = id` and
/// `id − ιp = QH + HQ`.
pub trait Retract<E> {
    fn iota(&self, x: &E) -> Result<E>;
    fn proj(&self, x: &E) -> Result<E>;
    fn homotopy(&self, x: &E) -> Result<E>;
}

/// Homotopy datum for one of the field complexes.
#[derive(Debug, Clone)]
pub struct HomotopyDatum {
    complex: Complex,
    k_scale: Scalar,
}

impl HomotopyDatum {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn variant(&self) -> Variant {
        self.complex.variant()
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    /// Negative control: a datum whose homotopy uses `c·K` in place of `K`.
    pub fn with_scaled_homotopy(mut self, c: Scalar) -> Self {
        self.k_scale = c;
        self
    }

    fn apply_h(&self, idx: &SummandIndex, mu: &PolyVector) -> Option<(SummandIndex, PolyVector)> {
        let d = self.dim();
        let target = match idx.tower {
            Tower::Standard if idx.t_power == 0 => return None,
            Tower::Standard => SummandIndex::standard(idx.t_power - 1, idx.xi_degree + 1),
            Tower::Potential if idx.xi_degree == d => return None,
            Tower::Potential => SummandIndex::potential(idx.t_power - 1, idx.xi_degree + 1),
            Tower::Central => return None,
        };
        Some((target, contraction_k(mu).scale(&self.k_scale)))
    }

    fn apply_p(&self, idx: &SummandIndex, mu: &PolyVector) -> Option<(SummandIndex, PolyVector)> {
        let d = self.dim();
        match idx.tower {
            Tower::Standard if idx.t_power != 0 => None,
            Tower::Standard if idx.xi_degree == 0 => Some((*idx, mu.clone())),
            Tower::Standard => Some((*idx, closed_part(mu))),
            Tower::Potential => {
                let whole_top = self.variant() == Variant::Potential(d - 1);
                if whole_top {
                    Some((*idx, mu.clone()))
                } else if idx.t_power == 0 {
                    Some((*idx, contraction_k(&divergence(mu))))
                } else if idx.xi_degree == d {
                    Some((SummandIndex::central(), SuperPoly::constant(d, mu.top_constant())))
                } else {
                    None
                }
            }
            Tower::Central => None,
        }
    }

    fn apply_iota(&self, idx: &SummandIndex, mu: &PolyVector) -> (SummandIndex, PolyVector) {
        match idx.tower {
            Tower::Central => {
                let d = self.dim();
                let top = self.complex.potential_top().expect("central slot only for potential variants");
                (top, SuperPoly::top(d).scale(&mu.constant_term()))
            }
            _ => (*idx, mu.clone()),
        }
    }

    fn map_field<F>(&self, x: &DescendantField, f: F) -> Result<DescendantField>
    where
        F: Fn(&SummandIndex, &PolyVector) -> Option<(SummandIndex, PolyVector)>,
    {
        let mut out = DescendantField::zero(self.dim());
        for (idx, mu) in x.components() {
            if let Some((t, v)) = f(idx, mu) {
                out.add_component(t, &v)?;
            }
        }
        Ok(out)
    }
}

impl Retract<DescendantField> for HomotopyDatum {
    fn iota(&self, x: &DescendantField) -> Result<DescendantField> {
        self.map_field(x, |i, m| Some(self.apply_iota(i, m)))
    }

    fn proj(&self, x: &DescendantField) -> Result<DescendantField> {
        self.map_field(x, |i, m| self.apply_p(i, m))
    }

    fn homotopy(&self, x: &DescendantField) -> Result<DescendantField> {
        self.map_field(x, |i, m| self.apply_h(i, m))
    }
}

/// Builds the homotopy datum of the requested complex.
pub fn build_datum(d: usize, variant: Variant) -> Result<HomotopyDatum> {
    Ok(HomotopyDatum { complex: Complex::new(d, variant)?, k_scale: int(1) })
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SummandCheck {
    pub summand: String,
    pub samples: usize,
    pub relation_failures: usize,
    pub retraction_failures: usize,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SideConditions {
    pub h_squared_zero: bool,
    pub h_iota_zero: bool,
    pub p_h_zero: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DatumReport {
    pub variant: String,
    pub d: usize,
    pub summands: Vec<SummandCheck>,
    /// Measured only; never counted as failures.
    pub side_conditions: SideConditions,
}

impl DatumReport {
    pub fn passed(&self) -> bool {
        self.summands.iter().all(|s| s.relation_failures == 0 && s.retraction_failures == 0)
    }
}

/// Checks `pι = id` and `id − ιp = QH + HQ` on seeded samples from every
/// summand, and measures the side conditions.
pub fn verify_datum(datum: &HomotopyDatum, budget: usize, max_degree: u32, seed: u64) -> Result<DatumReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let complex = datum.complex();
    let d = complex.dim();
    let summands = complex.summands();
    let per = budget.div_ceil(summands.len()).max(1);
    let mut side = SideConditions { h_squared_zero: true, h_iota_zero: true, p_h_zero: true };
    let mut checks = Vec::new();
    for idx in &summands {
        let mut check = SummandCheck {
            summand: idx.to_string(),
            samples: per,
            relation_failures: 0,
            retraction_failures: 0,
            witness: None,
        };
        for _ in 0..per {
            let mu = random_poly(&mut rng, d, max_degree.max(idx.xi_degree as u32), Some(idx.xi_degree));
            let x = DescendantField::single(*idx, mu);
            let qh = complex.differential(&datum.homotopy(&x)?)?;
            let hq = datum.homotopy(&complex.differential(&x)?)?;
            let ip = datum.iota(&datum.proj(&x)?)?;
            let lhs = x.sub(&ip)?;
            let rhs = qh.add(&hq)?;
            if lhs != rhs {
                check.relation_failures += 1;
                check.witness.get_or_insert_with(|| x.to_text());
            }
            let h = datum.homotopy(&x)?;
            side.h_squared_zero &= datum.homotopy(&h)?.is_zero();
            side.p_h_zero &= datum.proj(&h)?.is_zero();
        }
        checks.push(check);
    }
    // Retraction on carrier samples, drawn through p so that they are valid.
    let carrier = complex.carrier_summands();
    for idx in &carrier {
        let mut check = SummandCheck {
            summand: format!("carrier {idx}"),
            samples: per,
            relation_failures: 0,
            retraction_failures: 0,
            witness: None,
        };
        for _ in 0..per {
            let c = complex.random_carrier_element(&mut rng, idx, max_degree)?;
            let back = datum.proj(&datum.iota(&c)?)?;
            if back != c {
                check.retraction_failures += 1;
                check.witness.get_or_insert_with(|| c.to_text());
            }
            side.h_iota_zero &= datum.homotopy(&datum.iota(&c)?)?.is_zero();
        }
        checks.push(check);
    }
    Ok(DatumReport {
        variant: datum.variant().to_string(),
        d,
        summands: checks,
        side_conditions: side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpoly::random_poly_seeded;

    fn p(d: usize, s: &str) -> SuperPoly {
        SuperPoly::parse(d, s).unwrap()
    }

    #[test]
    fn k_examples() {
        assert_eq!(contraction_k(&p(1, "1")), p(1, "x1*xi1"));
        assert_eq!(divergence(&contraction_k(&p(2, "xi1"))), p(2, "xi1"));
        assert_eq!(contraction_k(&p(3, "xi1*xi2")), p(3, "x3*xi1*xi2*xi3"));
        assert_eq!(contraction_k(&p(3, "xi2*xi3")), p(3, "x1*xi1*xi2*xi3"));
    }

    #[test]
    fn homotopy_relation_on_every_degree() {
        for d in 1..=4 {
            for seed in 0..30 {
                for j in 0..d {
                    let mu = random_poly_seeded(d, 5, Some(j), seed);
                    let lhs = divergence(&contraction_k(&mu)).add(&contraction_k(&divergence(&mu))).unwrap();
                    assert_eq!(lhs, mu, "d={d} j={j}");
                }
                let top = random_poly_seeded(d, 5, Some(d), seed);
                let lhs = contraction_k(&divergence(&top));
                assert_eq!(lhs, top.sub(&top_constant_part(&top)).unwrap());
            }
        }
    }

    #[test]
    fn k_squares_to_zero_and_top_has_no_constant() {
        for seed in 0..30 {
            let mu = random_poly_seeded(3, 4, None, seed);
            assert!(contraction_k(&contraction_k(&mu)).is_zero());
            let top = contraction_k(&random_poly_seeded(3, 4, Some(2), seed));
            assert_eq!(top.top_constant(), int(0));
        }
    }

    #[test]
    fn datum_examples() {
        let mb = build_datum(3, Variant::Mbcov).unwrap();
        let tx = DescendantField::single(SummandIndex::standard(1, 0), p(3, "x1"));
        assert!(mb.proj(&tx).unwrap().is_zero());
        let w = DescendantField::single(SummandIndex::standard(0, 2), p(3, "xi1*xi2"));
        assert_eq!(mb.proj(&mb.iota(&w).unwrap()).unwrap(), w);

        let pot = build_datum(4, Variant::Potential(2)).unwrap();
        let c = DescendantField::single(SummandIndex::potential(-1, 4), p(4, "7*xi1*xi2*xi3*xi4"));
        assert_eq!(pot.proj(&c).unwrap(), DescendantField::central(4, int(7)));
    }

    #[test]
    fn every_datum_verifies() {
        let cases = [
            (2, Variant::Mbcov),
            (3, Variant::Mbcov),
            (4, Variant::Mbcov),
            (3, Variant::Potential(2)),
            (4, Variant::Potential(3)),
            (4, Variant::Potential(2)),
            (5, Variant::Potential(2)),
        ];
        for (d, v) in cases {
            let datum = build_datum(d, v).unwrap();
            let r = verify_datum(&datum, 60, 3, 5).unwrap();
            assert!(r.passed(), "{r:?}");
            let s = &r.side_conditions;
            assert!(s.h_squared_zero && s.h_iota_zero && s.p_h_zero, "{d} {v}: {s:?}");
        }
    }

    #[test]
    fn corrupted_datum_is_caught() {
        let datum = build_datum(3, Variant::Mbcov).unwrap().with_scaled_homotopy(int(2));
        let r = verify_datum(&datum, 40, 3, 1).unwrap();
        assert!(!r.passed());
        assert!(r.summands.iter().any(|s| s.witness.is_some()));
    }
}
