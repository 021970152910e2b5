//! Polyvector calculus on C^d through `PV(C^d) ≅ O(C^{d|d})` (`ξ_i ↔ ∂/∂x_i`).
//!
//! The divergence is the odd Laplacian `Δ = Σ_i ∂/∂x_i ∂/∂ξ_i`. The volume
//! form is `Ω = dx_1 ∧ … ∧ dx_d` and contraction follows the full-contraction
//! rule `ξ_I ∨ Ω = sgn(I, J) dx_J`, where `J` is the complement of `I` and
//! `sgn(I, J)` sorts the concatenation `(I, J)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::superpoly::{full_mask, merge_sign, sign, Monomial, Scalar, SuperPoly};

/// A polyvector field is a function on C^{d|d}; the ξ-degree is the
/// polyvector degree.
pub type PolyVector = SuperPoly;

/// A holomorphic form with polynomial coefficients; `ξ_i` stands for `dx_i`
/// and the ξ-degree is the form degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolomorphicForm(pub SuperPoly);

impl HolomorphicForm {
    pub fn as_poly(&self) -> &SuperPoly {
        &self.0
    }

    pub fn form_degrees(&self) -> Vec<usize> {
        self.0.xi_degrees()
    }
}

/// `Δ = Σ_i ∂/∂x_i ∘ ∂/∂ξ_i`.
pub fn divergence(mu: &PolyVector) -> PolyVector {
    let d = mu.dim();
    let mut out = SuperPoly::zero(d);
    for (m, c) in mu.terms() {
        let exps = m.exps();
        let odd = m.odd_mask();
        for b in 0..d {
            let bit = 1u32 << b;
            if odd & bit == 0 || exps[b] == 0 {
                continue;
            }
            let before = (odd & (bit - 1)).count_ones() % 2 == 1;
            let mut e = exps.to_vec();
            e[b] -= 1;
            let coef = c * Scalar::from_integer(BigInt::from(exps[b]));
            out.add_term(Monomial::new(e, odd & !bit), if before { -coef } else { coef });
        }
    }
    out
}

/// The derived bracket `Δ(μν) − (Δμ)ν − (−1)^{|μ|} μ(Δν)`, extended
/// bilinearly over the ξ-homogeneous parts of `μ`.
///
/// It is graded symmetric for the parity "ξ-degree mod 2" and is the
/// quadratic bracket of the odd (shifted) presentation.
pub fn derived_bracket(mu: &PolyVector, nu: &PolyVector) -> Result<PolyVector> {
    let d_nu = divergence(nu);
    let mut out = SuperPoly::zero(mu.dim());
    for j in mu.xi_degrees() {
        let m = mu.xi_component(j);
        let mut part = divergence(&m.mul(nu)?);
        part = part.sub(&divergence(&m).mul(nu)?)?;
        let t = m.mul(&d_nu)?;
        part = if j % 2 == 1 { part.add(&t)? } else { part.sub(&t)? };
        out = out.add(&part)?;
    }
    Ok(out)
}

/// Schouten–Nijenhuis bracket `[μ,ν] = (−1)^{|μ|−1}(Δ(μν) − (Δμ)ν − (−1)^{|μ|}μΔν)`.
pub fn schouten(mu: &PolyVector, nu: &PolyVector) -> Result<PolyVector> {
    let mut out = SuperPoly::zero(mu.dim());
    for j in mu.xi_degrees() {
        let part = derived_bracket(&mu.xi_component(j), nu)?;
        out = if j % 2 == 1 { out.add(&part)? } else { out.sub(&part)? };
    }
    Ok(out)
}

fn complement_contract(p: &SuperPoly, inverse: bool) -> SuperPoly {
    let full = full_mask(p.dim());
    let mut out = SuperPoly::zero(p.dim());
    for (m, c) in p.terms() {
        let i = m.odd_mask();
        let j = full & !i;
        let flip = if inverse { merge_sign(j, i) } else { merge_sign(i, j) };
        out.add_term(Monomial::new(m.exps().to_vec(), j), if flip { -c.clone() } else { c.clone() });
    }
    out
}

/// `μ ↦ μ ∨ Ω`, sending PV^i to Ω^{d−i}.
pub fn vee_omega(mu: &PolyVector) -> HolomorphicForm {
    HolomorphicForm(complement_contract(mu, false))
}

/// Inverse of [`vee_omega`]: `dx_J ↦ sgn(I, J) ξ_I` with `I` the complement.
pub fn vee_omega_inv(omega: &HolomorphicForm) -> PolyVector {
    complement_contract(&omega.0, true)
}

/// Holomorphic de Rham differential `d = Σ_i dx_i ∧ ∂/∂x_i` on forms.
pub fn de_rham(omega: &HolomorphicForm) -> HolomorphicForm {
    let p = &omega.0;
    let d = p.dim();
    let mut out = SuperPoly::zero(d);
    for i in 1..=d {
        let di = p.d_even(i).expect("index in range");
        out = out.add(&SuperPoly::xi(d, i).mul(&di).expect("same dim")).expect("same dim");
    }
    HolomorphicForm(out)
}

/// The de Rham differential transported to polyvectors, `(d(μ ∨ Ω)) ∨ Ω⁻¹`.
/// On ξ-degree `k` it equals `(−1)^{k−1} Δ`.
pub fn transported_divergence(mu: &PolyVector) -> PolyVector {
    vee_omega_inv(&de_rham(&vee_omega(mu)))
}

/// Sign relating the transported de Rham differential to Δ on ξ-degree `k`.
pub fn transport_sign(k: usize) -> Scalar {
    sign(k.is_multiple_of(2))
}

/// Coefficient of `ξ_1 ⋯ ξ_d` at `x = 0` in `α β`, i.e. `(α∧β)(0) ∨ Ω`.
pub fn top_constant_pairing(alpha: &PolyVector, beta: &PolyVector) -> Result<Scalar> {
    Ok(alpha.mul(beta)?.top_constant())
}

/// Genus-zero descendent integral `∫ ψ_1^{k_1} ⋯ ψ_n^{k_n}` over M̄_{0,n}:
/// the multinomial `(n−3; k_1, …, k_n)` when `Σ k_i = n − 3`, else 0.
pub fn descendent_coefficient(ks: &[u32]) -> Result<BigInt> {
    let n = ks.len();
    if n < 3 {
        return Err(CoreError::TooFewInsertions(n));
    }
    let total: u64 = ks.iter().map(|&k| k as u64).sum();
    if total != (n - 3) as u64 {
        return Ok(BigInt::zero());
    }
    let mut out = factorial(n as u64 - 3);
    for &k in ks {
        out /= factorial(k as u64);
    }
    Ok(out)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superpoly::{int, random_poly_seeded};

    fn p(d: usize, s: &str) -> SuperPoly {
        SuperPoly::parse(d, s).unwrap()
    }

    #[test]
    fn divergence_examples() {
        assert!(divergence(&p(2, "xi1")).is_zero());
        assert_eq!(divergence(&p(2, "x1*xi1")), p(2, "1"));
        assert_eq!(divergence(&p(2, "x1^2*xi1*xi2")), p(2, "2*x1*xi2"));
    }

    #[test]
    fn schouten_examples() {
        assert_eq!(schouten(&p(2, "xi1"), &p(2, "x1")).unwrap(), p(2, "1"));
        assert!(schouten(&p(2, "x1^2"), &p(2, "x2 + x1")).unwrap().is_zero());
        assert_eq!(
            schouten(&p(2, "xi1*xi2"), &p(2, "x1*x2")).unwrap(),
            p(2, "x1*xi1 - x2*xi2")
        );
        assert_eq!(schouten(&p(2, "x1"), &p(2, "xi1")).unwrap(), p(2, "-1"));
    }

    #[test]
    fn contraction_with_volume_form() {
        assert_eq!(vee_omega(&p(3, "xi1*xi2*xi3")).0, p(3, "1"));
        assert_eq!(vee_omega(&p(3, "1")).0, p(3, "xi1*xi2*xi3"));
        // ξ2 ∨ Ω: sorting (2, 1, 3) is odd
        assert_eq!(vee_omega(&p(3, "xi2")).0, p(3, "-xi1*xi3"));
        for seed in 0..50 {
            let mu = random_poly_seeded(2 + seed as usize % 3, 4, None, seed);
            assert_eq!(vee_omega_inv(&vee_omega(&mu)), mu);
        }
    }

    #[test]
    fn transport_matches_divergence_with_fixed_sign() {
        for d in 1..=4 {
            for seed in 0..40 {
                let mu = random_poly_seeded(d, 5, None, seed);
                for k in mu.xi_degrees() {
                    let c = mu.xi_component(k);
                    assert_eq!(
                        transported_divergence(&c),
                        divergence(&c).scale(&transport_sign(k)),
                        "d={d} k={k} mu={c}"
                    );
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let pair = |a, b| top_constant_pairing(&p(3, a), &p(3, b)).unwrap();
        assert_eq!(pair("xi1", "xi2*xi3"), int(1));
        assert_eq!(pair("x1*xi1", "xi2*xi3"), int(0));
        assert_eq!(pair("xi1*xi2", "xi3"), int(1));
    }

    #[test]
    fn descendent_examples() {
        assert_eq!(descendent_coefficient(&[0, 0, 0]).unwrap(), BigInt::one());
        assert_eq!(descendent_coefficient(&[1, 0, 0, 0]).unwrap(), BigInt::one());
        assert_eq!(descendent_coefficient(&[2, 0, 0]).unwrap(), BigInt::zero());
        assert_eq!(descendent_coefficient(&[1, 1, 0, 0, 0]).unwrap(), BigInt::from(2));
        assert!(matches!(descendent_coefficient(&[0, 0]), Err(CoreError::TooFewInsertions(2))));
    }

    #[test]
    fn wedge_divergence_identity_in_three_dimensions() {
        // μ ∧ Δ(β ξ1ξ2ξ3) = [μ, β] ξ1ξ2ξ3 for μ a vector field, β a function
        let top = SuperPoly::top(3);
        for seed in 0..30 {
            let mu = random_poly_seeded(3, 4, Some(1), seed);
            let beta = random_poly_seeded(3, 4, Some(0), seed + 1000);
            let lhs = mu.mul(&divergence(&beta.mul(&top).unwrap())).unwrap();
            let rhs = schouten(&mu, &beta).unwrap().mul(&top).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
