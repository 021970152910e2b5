//! Vector fields on C^{d|d}, the odd Hamiltonian map, and SHO(d|d) with its
//! central extensions.
//!
//! Elements of SHO are carried by Hamiltonian generators. For d = 3 the
//! two-dimensional centre is split off into explicit slots: `e₂ = [1]` and
//! `e₁ = −[ξ1ξ2ξ3]`.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::contraction::closed_part;
use crate::error::{CoreError, Result};
use crate::linalg::kernel_of;
use crate::pvcalc::{divergence, schouten, top_constant_pairing};
use crate::superpoly::{frac, int, monomial_basis, random_poly, sign, Monomial, Scalar, SuperPoly};

/// `Σ μ_{x_i} ∂/∂x_i + Σ μ_{ξ_i} ∂/∂ξ_i`, coefficients on the left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperVectorField {
    d: usize,
    x: Vec<SuperPoly>,
    xi: Vec<SuperPoly>,
}

impl SuperVectorField {
    pub fn zero(d: usize) -> Self {
        SuperVectorField { d, x: vec![SuperPoly::zero(d); d], xi: vec![SuperPoly::zero(d); d] }
    }

    pub fn new(x: Vec<SuperPoly>, xi: Vec<SuperPoly>) -> Result<Self> {
        let d = x.len();
        if xi.len() != d {
            return Err(CoreError::DimensionMismatch(d, xi.len()));
        }
        for c in x.iter().chain(&xi) {
            if c.dim() != d {
                return Err(CoreError::DimensionMismatch(d, c.dim()));
            }
        }
        Ok(SuperVectorField { d, x, xi })
    }

    /// `c · ∂/∂x_i` (1-based).
    pub fn along_x(d: usize, i: usize, c: SuperPoly) -> Result<Self> {
        check_index(d, i)?;
        let mut v = Self::zero(d);
        v.x[i - 1] = c;
        Ok(v)
    }

    /// `c · ∂/∂ξ_i` (1-based).
    pub fn along_xi(d: usize, i: usize, c: SuperPoly) -> Result<Self> {
        check_index(d, i)?;
        let mut v = Self::zero(d);
        v.xi[i - 1] = c;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn x_coeffs(&self) -> &[SuperPoly] {
        &self.x
    }

    pub fn xi_coeffs(&self) -> &[SuperPoly] {
        &self.xi
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().chain(&self.xi).all(SuperPoly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(CoreError::DimensionMismatch(self.d, other.d));
        }
        let zip = |a: &[SuperPoly], b: &[SuperPoly]| -> Vec<SuperPoly> {
            a.iter().zip(b).map(|(p, q)| p.add(q).expect("same dim")).collect()
        };
        Ok(SuperVectorField { d: self.d, x: zip(&self.x, &other.x), xi: zip(&self.xi, &other.xi) })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        SuperVectorField {
            d: self.d,
            x: self.x.iter().map(|p| p.scale(c)).collect(),
            xi: self.xi.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Parity of a homogeneous field: that of its `∂/∂x` coefficients.
    pub fn parity(&self) -> Option<bool> {
        let (even, odd) = self.parity_parts();
        match (even.is_zero(), odd.is_zero()) {
            (_, true) => Some(false),
            (true, false) => Some(true),
            _ => None,
        }
    }

    /// Splits into even and odd fields.
    pub fn parity_parts(&self) -> (Self, Self) {
        let even_xi = |m: &Monomial| m.xi_degree().is_multiple_of(2);
        let odd_xi = |m: &Monomial| m.xi_degree() % 2 == 1;
        let even = SuperVectorField {
            d: self.d,
            x: self.x.iter().map(|p| p.filter(even_xi)).collect(),
            xi: self.xi.iter().map(|p| p.filter(odd_xi)).collect(),
        };
        let odd = SuperVectorField {
            d: self.d,
            x: self.x.iter().map(|p| p.filter(odd_xi)).collect(),
            xi: self.xi.iter().map(|p| p.filter(even_xi)).collect(),
        };
        (even, odd)
    }

    /// The field as a first-order operator.
    pub fn apply(&self, f: &SuperPoly) -> Result<SuperPoly> {
        if f.dim() != self.d {
            return Err(CoreError::DimensionMismatch(self.d, f.dim()));
        }
        let mut out = SuperPoly::zero(self.d);
        for i in 1..=self.d {
            if !self.x[i - 1].is_zero() {
                out = out.add(&self.x[i - 1].mul(&f.d_even(i)?)?)?;
            }
            if !self.xi[i - 1].is_zero() {
                out = out.add(&self.xi[i - 1].mul(&f.d_odd(i)?)?)?;
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (name, cs) in [("dx", &self.x), ("dxi", &self.xi)] {
            for (i, c) in cs.iter().enumerate() {
                if !c.is_zero() {
                    parts.push(format!("({})*{}{}", c.to_text(), name, i + 1));
                }
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn check_index(d: usize, i: usize) -> Result<()> {
    if i == 0 || i > d {
        Err(CoreError::IndexOutOfRange { index: i, dim: d })
    } else {
        Ok(())
    }
}

/// `Ham(f) = Σ ∂f/∂x_i ∂/∂ξ_i + (−1)^{|f|} ∂f/∂ξ_i ∂/∂x_i`, applied to each
/// parity part of `f`.
pub fn hamiltonian_vf(f: &SuperPoly) -> SuperVectorField {
    let d = f.dim();
    let mut v = SuperVectorField::zero(d);
    for odd in [false, true] {
        let part = f.filter(|m| (m.xi_degree() % 2 == 1) == odd);
        if part.is_zero() {
            continue;
        }
        for i in 1..=d {
            let dx = part.d_even(i).expect("index in range");
            let dxi = part.d_odd(i).expect("index in range");
            v.xi[i - 1] = v.xi[i - 1].add(&dx).expect("same dim");
            v.x[i - 1] = v.x[i - 1].add(&dxi.scale(&sign(odd))).expect("same dim");
        }
    }
    v
}

/// `Dμ = Σ ∂μ_{x_i}/∂x_i + Σ (−1)^{|μ_{ξ_i}|} ∂μ_{ξ_i}/∂ξ_i`.
pub fn super_divergence(v: &SuperVectorField) -> SuperPoly {
    let d = v.d;
    let mut out = SuperPoly::zero(d);
    for i in 1..=d {
        out = out.add(&v.x[i - 1].d_even(i).expect("index in range")).expect("same dim");
        for odd in [false, true] {
            let part = v.xi[i - 1].filter(|m| (m.xi_degree() % 2 == 1) == odd);
            let term = part.d_odd(i).expect("index in range").scale(&sign(odd));
            out = out.add(&term).expect("same dim");
        }
    }
    out
}

/// Super-commutator `[μ,ν] = μ∘ν − (−1)^{|μ||ν|} ν∘μ`, bilinear over the
/// parity parts.
pub fn vf_bracket(a: &SuperVectorField, b: &SuperVectorField) -> Result<SuperVectorField> {
    if a.d != b.d {
        return Err(CoreError::DimensionMismatch(a.d, b.d));
    }
    let d = a.d;
    let (ae, ao) = a.parity_parts();
    let (be, bo) = b.parity_parts();
    let mut out = SuperVectorField::zero(d);
    for (u, pu) in [(&ae, false), (&ao, true)] {
        if u.is_zero() {
            continue;
        }
        for (w, pw) in [(&be, false), (&bo, true)] {
            if w.is_zero() {
                continue;
            }
            let s = sign(pu && pw);
            let comp = |uc: &SuperPoly, wc: &SuperPoly| -> Result<SuperPoly> {
                u.apply(wc)?.sub(&w.apply(uc)?.scale(&s))
            };
            let mut x = Vec::with_capacity(d);
            let mut xi = Vec::with_capacity(d);
            for i in 0..d {
                x.push(comp(&u.x[i], &w.x[i])?);
                xi.push(comp(&u.xi[i], &w.xi[i])?);
            }
            out = out.add(&SuperVectorField { d, x, xi })?;
        }
    }
    Ok(out)
}

/// Solves `Ham(g) = v` for a generator `g` with zero constant term.
///
/// Uses the Euler identity: on x-degree a and ξ-degree q,
/// `(a + q) g = Σ x_i ∂g/∂x_i + Σ ξ_i ∂g/∂ξ_i`.
pub fn invert_hamiltonian(v: &SuperVectorField) -> Result<SuperPoly> {
    let d = v.d;
    let mut raw = SuperPoly::zero(d);
    for i in 1..=d {
        raw = raw.add(&SuperPoly::x(d, i).mul(&v.xi[i - 1])?)?;
        let lifted = SuperPoly::xi(d, i).mul(&v.x[i - 1])?;
        // the product has the ξ-degree q of g; undo (−1)^{|g|}
        for (m, c) in lifted.terms() {
            raw.add_term(m.clone(), c * sign(m.xi_degree() % 2 == 1));
        }
    }
    let mut g = SuperPoly::zero(d);
    for (m, c) in raw.terms() {
        g.add_term(m.clone(), c / int(m.total_degree() as i64));
    }
    if hamiltonian_vf(&g) != *v {
        return Err(CoreError::NotHamiltonian(v.to_text()));
    }
    Ok(g)
}

/// Position of a generator in the filtration `HO ⊃ SHO′ ⊃ SHO`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// Constants have zero Hamiltonian field.
    NotHoGenerator,
    Ho,
    ShoPrime,
    Sho,
}

pub fn membership(f: &SuperPoly) -> Membership {
    let nonconstant = f.filter(|m| !m.is_one());
    if nonconstant.is_zero() {
        return Membership::NotHoGenerator;
    }
    if !divergence(f).is_zero() {
        Membership::Ho
    } else if !f.top_constant().is_zero() {
        Membership::ShoPrime
    } else {
        Membership::Sho
    }
}

/// Principal degree of a homogeneous generator: total degree minus two.
pub fn principal_degree(f: &SuperPoly) -> Option<i64> {
    let mut degs = f.terms().map(|(m, _)| m.total_degree() as i64 - 2);
    let first = degs.next()?;
    degs.all(|x| x == first).then_some(first)
}

/// `κ` in `D(Ham f) = κ_{|f|} Δf` (pinned in the ledger).
pub const KAPPA_EVEN: i64 = 2;
pub const KAPPA_ODD: i64 = -2;

pub fn kappa(odd: bool) -> Scalar {
    int(if odd { KAPPA_ODD } else { KAPPA_EVEN })
}

/// Ratio `D(Ham f) / Δf` on a monomial probe with `Δf ≠ 0`.
pub fn measure_kappa(probe: &SuperPoly) -> Result<Scalar> {
    let lap = divergence(probe);
    let div = super_divergence(&hamiltonian_vf(probe));
    let (m, c) = lap.terms().next().ok_or_else(|| CoreError::InvalidConfig("probe has Δf = 0".into()))?;
    let k = div.coeff(m) / c;
    if div != lap.scale(&k) {
        return Err(CoreError::InvalidConfig("probe is not proportional".into()));
    }
    Ok(k)
}

/// `σ` in `[Ham f, Ham g] = σ Ham([f,g]_SN)`; the same for every parity pair
/// (pinned in the ledger).
pub fn lie_sign(_f_odd: bool, _g_odd: bool) -> Scalar {
    int(-1)
}

/// Measures `σ` on a pair; `None` when both sides vanish.
pub fn measure_lie_sign(f: &SuperPoly, g: &SuperPoly) -> Result<Option<Scalar>> {
    let lhs = vf_bracket(&hamiltonian_vf(f), &hamiltonian_vf(g))?;
    let rhs = hamiltonian_vf(&schouten(f, g)?);
    if rhs.is_zero() {
        return if lhs.is_zero() { Ok(None) } else { Err(CoreError::Unsolvable) };
    }
    for s in [int(1), int(-1)] {
        if lhs == rhs.scale(&s) {
            return Ok(Some(s));
        }
    }
    Err(CoreError::Unsolvable)
}

/// A basis of SHO(d|d) in one principal degree: divergence-free generators of
/// total degree `n + 2`, without constants or the top monomial.
pub fn sho_basis(d: usize, principal: i64) -> Vec<SuperPoly> {
    let total = principal + 2;
    if total < 1 {
        return Vec::new();
    }
    let total = total as u32;
    let dom: Vec<SuperPoly> = monomial_basis(d, total)
        .into_iter()
        .filter(|m| m.total_degree() == total && *m != Monomial::top(d))
        .map(|m| SuperPoly::monomial(m, Scalar::one()))
        .collect();
    if dom.is_empty() {
        return Vec::new();
    }
    let img: Vec<SuperPoly> = dom.iter().map(divergence).collect();
    let mut out = kernel_of(&dom, &img);
    out.sort_by_key(|p| p.to_text());
    out
}

/// Strips the constant and top parts of a generator.
pub fn sho_part(f: &SuperPoly) -> SuperPoly {
    let d = f.dim();
    let top = Monomial::top(d);
    f.filter(|m| !m.is_one() && *m != top)
}

/// Seeded SHO element of total degree ≤ `max_total_degree`, projected into
/// ker Δ with `closed_part`.
pub fn random_sho_generator<R: Rng + ?Sized>(rng: &mut R, d: usize, max_total_degree: u32) -> SuperPoly {
    sho_part(&closed_part(&random_poly(rng, d, max_total_degree, None)))
}

/// Element of the two-dimensional central extension of SHO(3|3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtElement {
    gen: SuperPoly,
    c1: Scalar,
    c2: Scalar,
}

impl ExtElement {
    /// Constants go to `e₂ = [1]` and the top monomial to `e₁ = −[ξ1ξ2ξ3]`.
    pub fn from_generator(f: &SuperPoly) -> Result<Self> {
        if f.dim() != 3 {
            return Err(CoreError::UnsupportedDimension(f.dim()));
        }
        if !divergence(f).is_zero() {
            return Err(CoreError::NotInCarrier(format!("Δ({}) ≠ 0", f.to_text())));
        }
        Ok(ExtElement { gen: sho_part(f), c1: -f.top_constant(), c2: f.constant_term() })
    }

    pub fn central(c1: Scalar, c2: Scalar) -> Self {
        ExtElement { gen: SuperPoly::zero(3), c1, c2 }
    }

    pub fn e1() -> Self {
        Self::central(Scalar::one(), Scalar::zero())
    }

    pub fn e2() -> Self {
        Self::central(Scalar::zero(), Scalar::one())
    }

    pub fn zero() -> Self {
        Self::central(Scalar::zero(), Scalar::zero())
    }

    pub fn generator(&self) -> &SuperPoly {
        &self.gen
    }

    pub fn c1(&self) -> &Scalar {
        &self.c1
    }

    pub fn c2(&self) -> &Scalar {
        &self.c2
    }

    pub fn is_zero(&self) -> bool {
        self.gen.is_zero() && self.c1.is_zero() && self.c2.is_zero()
    }

    pub fn is_central(&self) -> bool {
        self.gen.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        ExtElement { gen: self.gen.add(&o.gen).expect("d = 3"), c1: &self.c1 + &o.c1, c2: &self.c2 + &o.c2 }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ExtElement { gen: self.gen.scale(c), c1: &self.c1 * c, c2: &self.c2 * c }
    }

    /// Lie parity: ξ-degree + 1 on generators; the centre is odd.
    pub fn parity(&self) -> Option<bool> {
        let mut ps = self.gen.terms().map(|(m, _)| m.xi_degree() % 2 == 0);
        let central = !(self.c1.is_zero() && self.c2.is_zero());
        let first = ps.next().or(central.then_some(true))?;
        let mut all = ps.chain(central.then_some(true));
        all.all(|p| p == first).then_some(first)
    }

    /// Parity-homogeneous pieces (even, odd).
    pub fn parity_parts(&self) -> (Self, Self) {
        let even = ExtElement {
            gen: self.gen.filter(|m| m.xi_degree() % 2 == 1),
            c1: Scalar::zero(),
            c2: Scalar::zero(),
        };
        let odd = ExtElement { gen: self.gen.filter(|m| m.xi_degree() % 2 == 0), c1: self.c1.clone(), c2: self.c2.clone() };
        (even, odd)
    }

    pub fn to_text(&self) -> String {
        let mut s = self.gen.to_text();
        for (c, name) in [(&self.c1, "e1"), (&self.c2, "e2")] {
            if !c.is_zero() {
                s.push_str(&format!(" + ({c})*{name}"));
            }
        }
        s
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Serialize for ExtElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ExtElement", 3)?;
        st.serialize_field("gen", &self.gen.to_text())?;
        st.serialize_field("e1", &self.c1.to_string())?;
        st.serialize_field("e2", &self.c2.to_string())?;
        st.end()
    }
}

/// `e₂`-channel cocycle: constant term of the Schouten bracket.
pub fn c2_cocycle(f: &SuperPoly, g: &SuperPoly) -> Result<Scalar> {
    Ok(schouten(f, g)?.constant_term())
}

/// `e₁`-channel cocycle: `(−1)^{|f|} (f g)(0) ∨ Ω`, with `|f|` the ξ-parity.
pub fn c1_cocycle(f: &SuperPoly, g: &SuperPoly) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for odd in [false, true] {
        let part = f.filter(|m| (m.xi_degree() % 2 == 1) == odd);
        if !part.is_zero() {
            acc += sign(odd) * top_constant_pairing(&part, g)?;
        }
    }
    Ok(acc)
}

/// Bracket of the central extension of SHO(3|3): Schouten on generators plus
/// the two cocycle channels. Central inputs bracket to zero.
pub fn ext_bracket_d3(a: &ExtElement, b: &ExtElement) -> Result<ExtElement> {
    let s = schouten(&a.gen, &b.gen)?;
    let mut out = ExtElement::from_generator(&s)?;
    out.c1 += c1_cocycle(&a.gen, &b.gen)?;
    Ok(out)
}

/// The SHO Lie bracket on generators (centre discarded).
pub fn sho_bracket(f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
    Ok(sho_part(&schouten(f, g)?))
}

#[derive(Debug, Clone, Serialize)]
pub struct CocycleReport {
    pub name: String,
    pub samples: usize,
    /// Triples on which some term is nonzero.
    pub nontrivial: usize,
    pub failures: usize,
    /// Serialized failing triple.
    pub witness: Option<String>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Checks `c(a,[b,x]) = c([a,b],x) + (−1)^{|a||b|} c(b,[a,x])` with Lie
/// parity ξ-degree + 1. Every ordered triple of `samples` is checked when
/// there are at most `trials` of them; otherwise `trials` seeded triples.
pub fn cocycle_check(
    name: &str,
    c: &dyn Fn(&SuperPoly, &SuperPoly) -> Result<Scalar>,
    samples: &[SuperPoly],
    trials: usize,
    seed: u64,
) -> Result<CocycleReport> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let homog: Vec<&SuperPoly> = samples.iter().filter(|p| !p.is_zero() && p.parity().is_some()).collect();
    let n = homog.len();
    let mut report = CocycleReport { name: name.into(), samples: 0, nontrivial: 0, failures: 0, witness: None };
    let triples: Vec<(usize, usize, usize)> = if n.pow(3) <= trials {
        (0..n).flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |x| (a, b, x)))).collect()
    } else if n == 0 {
        Vec::new()
    } else {
        (0..trials).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    for (ia, ib, ix) in triples {
        let (a, b, x) = (homog[ia], homog[ib], homog[ix]);
        let pa = !a.parity().expect("homogeneous");
        let pb = !b.parity().expect("homogeneous");
        let t1 = c(a, &sho_bracket(b, x)?)?;
        let t2 = c(&sho_bracket(a, b)?, x)?;
        let t3 = sign(pa && pb) * c(b, &sho_bracket(a, x)?)?;
        report.samples += 1;
        if !(t1.is_zero() && t2.is_zero() && t3.is_zero()) {
            report.nontrivial += 1;
        }
        if t1 != t2 + t3 {
            report.failures += 1;
            if report.witness.is_none() {
                report.witness = Some(format!("a = {a}; b = {b}; x = {x}"));
            }
        }
    }
    Ok(report)
}

/// One row of the structure-constant table.
#[derive(Debug, Clone, Serialize)]
pub struct StructureRow {
    pub a: String,
    pub b: String,
    pub bracket: ExtElement,
}

/// All brackets of basis generators of SHO(3|3) with principal degrees in
/// `-1..=max_principal`, including the cocycle channels.
pub fn structure_constants_d3(max_principal: i64) -> Result<Vec<StructureRow>> {
    let basis: Vec<SuperPoly> = (-1..=max_principal).flat_map(|n| sho_basis(3, n)).collect();
    let mut rows = Vec::new();
    for f in &basis {
        for g in &basis {
            let br = ext_bracket_d3(&ExtElement::from_generator(f)?, &ExtElement::from_generator(g)?)?;
            if !br.is_zero() {
                rows.push(StructureRow { a: f.to_text(), b: g.to_text(), bracket: br });
            }
        }
    }
    Ok(rows)
}

/// `½` as a scalar, used by the sl₂ tables.
pub(crate) fn half() -> Scalar {
    frac(1, 2)
}

/// `ε_{ijk}` on 1-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (1, 3, 2) | (3, 2, 1) | (2, 1, 3) => -1,
        _ => 0,
    }
}
