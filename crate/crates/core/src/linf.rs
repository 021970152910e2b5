//! L∞ structures in the shifted convention: every bracket `l_n` is odd and
//! graded symmetric, and the generalized Jacobi identities read
//!
//! `Σ_{i+j=n+1} Σ_σ ε(σ) l_j(l_i(x_σ(1), …, x_σ(i)), x_σ(i+1), …, x_σ(n)) = 0`
//!
//! over `(i, n−i)`-unshuffles `σ`, with `ε` the Koszul sign.
//!
//! Homotopy transfer sums over rooted trees: leaves `ι`, root `p`, internal
//! edges `−H` (so that `ιp − id = Q(−H) + (−H)Q`), vertices `l_k` of arity
//! `k ≥ 2`. Subtrees are memoized by their leaf set.

use std::collections::HashMap;

use crate::complexes::{Complex, DescendantField, SummandIndex, Tower, Variant};
use crate::contraction::{contraction_k, Retract};
use crate::error::{CoreError, Result};
use crate::pvcalc::{derived_bracket, divergence, schouten, PolyVector};
use crate::superpoly::{int, sign, Scalar, SuperPoly};

/// Elements of a Z/2-graded vector space.
pub trait Graded: Clone {
    fn zero_like(&self) -> Self;
    fn add_assign(&mut self, other: &Self);
    fn scaled(&self, c: &Scalar) -> Self;
    fn is_zero(&self) -> bool;
    /// `Some(true)` for odd, `None` for zero or inhomogeneous elements.
    fn parity(&self) -> Option<bool>;
}

impl Graded for SuperPoly {
    fn zero_like(&self) -> Self {
        SuperPoly::zero(self.dim())
    }
    fn add_assign(&mut self, other: &Self) {
        self.axpy(&int(1), other);
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn is_zero(&self) -> bool {
        SuperPoly::is_zero(self)
    }
    fn parity(&self) -> Option<bool> {
        SuperPoly::parity(self)
    }
}

impl Graded for DescendantField {
    fn zero_like(&self) -> Self {
        DescendantField::zero(self.dim())
    }
    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other).expect("same dimension");
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
    fn is_zero(&self) -> bool {
        DescendantField::is_zero(self)
    }
    fn parity(&self) -> Option<bool> {
        DescendantField::parity(self)
    }
}

/// A family of odd graded-symmetric multibrackets.
pub trait LInfty<E: Graded> {
    /// Arities whose brackets may be nonzero.
    fn arities(&self) -> Vec<usize>;

    /// Brackets of every arity up to this bound are known (zero unless listed).
    fn known_up_to(&self) -> usize {
        usize::MAX
    }

    /// `l_n(inputs)` with `n = inputs.len() ≥ 1`.
    fn bracket(&self, inputs: &[&E]) -> Result<E>;
}

/// Koszul sign (`true` = negative) of listing `order` when the elements
/// were originally in ascending index order.
pub fn koszul_sign(parities: &[bool], order: &[usize]) -> bool {
    let mut neg = false;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let (i, j) = (order[a], order[b]);
            if i > j && parities[i] && parities[j] {
                neg = !neg;
            }
        }
    }
    neg
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|b| mask >> b & 1 == 1).collect()
}

fn homogeneous_parities<E: Graded>(inputs: &[&E]) -> Option<Vec<bool>> {
    inputs.iter().map(|x| x.parity()).collect()
}

/// Evaluates the n-th generalized Jacobi combination on homogeneous inputs.
/// The result is zero iff the identity holds there.
pub fn jacobi_defect<E: Graded, S: LInfty<E> + ?Sized>(s: &S, inputs: &[&E]) -> Result<E> {
    let n = inputs.len();
    if n == 0 {
        return Err(CoreError::MissingBracket(0));
    }
    if n > s.known_up_to() {
        return Err(CoreError::MissingBracket(n));
    }
    let mut out = inputs[0].zero_like();
    let Some(par) = homogeneous_parities(inputs) else {
        return Ok(out);
    };
    let arities = s.arities();
    for i in 1..=n {
        let j = n + 1 - i;
        if !arities.contains(&i) || !arities.contains(&j) {
            continue;
        }
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != i {
                continue;
            }
            let first = bits(mask);
            let rest = bits(!mask & ((1 << n) - 1));
            let order: Vec<usize> = first.iter().chain(&rest).copied().collect();
            let inner_in: Vec<&E> = first.iter().map(|&k| inputs[k]).collect();
            let inner = s.bracket(&inner_in)?;
            if inner.is_zero() {
                continue;
            }
            let mut outer_in: Vec<&E> = vec![&inner];
            outer_in.extend(rest.iter().map(|&k| inputs[k]));
            let term = s.bracket(&outer_in)?;
            let sgn = sign(koszul_sign(&par, &order));
            out.add_assign(&term.scaled(&sgn));
        }
    }
    Ok(out)
}

/// Graded-symmetry defect of `l_n` under the transposition of slots `a`, `b`.
pub fn symmetry_defect<E: Graded, S: LInfty<E> + ?Sized>(s: &S, inputs: &[&E], a: usize, b: usize) -> Result<E> {
    let Some(par) = homogeneous_parities(inputs) else {
        return Ok(inputs[0].zero_like());
    };
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    order.swap(a, b);
    let swapped: Vec<&E> = order.iter().map(|&k| inputs[k]).collect();
    let lhs = s.bracket(inputs)?;
    let rhs = s.bracket(&swapped)?.scaled(&sign(koszul_sign(&par, &order)));
    let mut d = lhs;
    d.add_assign(&rhs.scaled(&int(-1)));
    Ok(d)
}

/// Set partitions of `mask` into at least two blocks, blocks ordered by least
/// element.
fn set_partitions(mask: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        let low = rest & rest.wrapping_neg();
        let others = rest & !low;
        // every subset of `others`, joined with `low`
        let mut sub = others;
        loop {
            acc.push(low | sub);
            rec(others & !sub, acc, out);
            acc.pop();
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & others;
        }
    }
    let mut out = Vec::new();
    rec(mask, &mut Vec::new(), &mut out);
    out.retain(|p| p.len() >= 2);
    out
}

/// The structure obtained by homotopy transfer through a retract.
pub struct Transferred<'a, S, R> {
    base: &'a S,
    datum: &'a R,
    cap: usize,
}

/// Builds the transferred structure with brackets up to `arity_cap`.
pub fn transfer<'a, E, S, R>(base: &'a S, datum: &'a R, arity_cap: usize) -> Result<Transferred<'a, S, R>>
where
    E: Graded,
    S: LInfty<E>,
    R: Retract<E>,
{
    if arity_cap < 2 {
        return Err(CoreError::ArityCap(arity_cap));
    }
    Ok(Transferred { base, datum, cap: arity_cap })
}

impl<S, R> Transferred<'_, S, R> {
    pub fn arity_cap(&self) -> usize {
        self.cap
    }
}

struct TreeSum<'a, E, S, R> {
    base: &'a S,
    datum: &'a R,
    leaves: Vec<E>,
    par: Vec<bool>,
    memo: HashMap<u32, E>,
}

impl<E, S, R> TreeSum<'_, E, S, R>
where
    E: Graded,
    S: LInfty<E>,
    R: Retract<E>,
{
    fn vertex_sum(&mut self, mask: u32) -> Result<E> {
        let arities = self.base.arities();
        let mut out = self.leaves[0].zero_like();
        for blocks in set_partitions(mask) {
            if !arities.contains(&blocks.len()) {
                continue;
            }
            let mut children = Vec::with_capacity(blocks.len());
            for &b in &blocks {
                children.push(self.subtree(b)?);
            }
            if children.iter().any(|c| c.is_zero()) {
                continue;
            }
            let order: Vec<usize> = blocks.iter().flat_map(|&b| bits(b)).collect();
            let refs: Vec<&E> = children.iter().collect();
            let v = self.base.bracket(&refs)?;
            out.add_assign(&v.scaled(&sign(koszul_sign(&self.par, &order))));
        }
        Ok(out)
    }

    fn subtree(&mut self, mask: u32) -> Result<E> {
        if mask.count_ones() == 1 {
            return Ok(self.leaves[mask.trailing_zeros() as usize].clone());
        }
        if let Some(v) = self.memo.get(&mask) {
            return Ok(v.clone());
        }
        let inner = self.vertex_sum(mask)?;
        let v = self.datum.homotopy(&inner)?.scaled(&int(-1));
        self.memo.insert(mask, v.clone());
        Ok(v)
    }
}

impl<E, S, R> LInfty<E> for Transferred<'_, S, R>
where
    E: Graded,
    S: LInfty<E>,
    R: Retract<E>,
{
    fn arities(&self) -> Vec<usize> {
        (1..=self.cap).collect()
    }

    fn known_up_to(&self) -> usize {
        self.cap
    }

    fn bracket(&self, inputs: &[&E]) -> Result<E> {
        let n = inputs.len();
        if n > self.cap {
            return Err(CoreError::MissingBracket(n));
        }
        let leaves: Vec<E> = inputs.iter().map(|x| self.datum.iota(x)).collect::<Result<_>>()?;
        if n == 1 {
            return self.datum.proj(&self.base.bracket(&[&leaves[0]])?);
        }
        let Some(par) = homogeneous_parities(inputs) else {
            return Ok(inputs[0].zero_like());
        };
        let mut trees = TreeSum { base: self.base, datum: self.datum, leaves, par, memo: HashMap::new() };
        let root = trees.vertex_sum((1u32 << n) - 1)?;
        self.datum.proj(&root)
    }
}

/// `(Δ, b)` on polyvectors, the shifted form of `(Δ, [−,−]_SN)`.
#[derive(Debug, Clone, Copy)]
pub struct ShiftedSchouten {
    pub with_differential: bool,
}

impl LInfty<SuperPoly> for ShiftedSchouten {
    fn arities(&self) -> Vec<usize> {
        if self.with_differential {
            vec![1, 2]
        } else {
            vec![2]
        }
    }

    fn bracket(&self, inputs: &[&SuperPoly]) -> Result<SuperPoly> {
        match inputs {
            [x] if self.with_differential => Ok(divergence(x)),
            [x, y] => derived_bracket(x, y),
            _ => Ok(inputs[0].zero_like()),
        }
    }
}

/// The dg-Lie structure `(tΔ, t-linear b)` on a field complex. Bracket
/// outputs with `i + j` outside the complex are truncated.
#[derive(Debug, Clone, Copy)]
pub struct BcovDgLie {
    complex: Complex,
}

impl BcovDgLie {
    pub fn new(complex: Complex) -> Self {
        BcovDgLie { complex }
    }
}

impl LInfty<DescendantField> for BcovDgLie {
    fn arities(&self) -> Vec<usize> {
        vec![1, 2]
    }

    fn bracket(&self, inputs: &[&DescendantField]) -> Result<DescendantField> {
        match inputs {
            [x] => self.complex.differential(x),
            [x, y] => {
                let mut out = DescendantField::zero(self.complex.dim());
                for (ia, a) in x.components() {
                    for (ib, b) in y.components() {
                        if ia.tower != Tower::Standard || ib.tower != Tower::Standard {
                            return Err(CoreError::MalformedField("dg-Lie bracket on the standard tower only".into()));
                        }
                        let j = ia.xi_degree + ib.xi_degree;
                        if j == 0 {
                            continue;
                        }
                        let target = SummandIndex::standard(ia.t_power + ib.t_power, j - 1);
                        if self.complex.contains(&target) {
                            out.add_component(target, &derived_bracket(a, b)?)?;
                        }
                    }
                }
                Ok(out)
            }
            _ => Ok(inputs[0].zero_like()),
        }
    }
}

/// The brackets that are identically zero.
#[derive(Debug, Clone, Copy)]
pub struct ZeroBrackets;

impl<E: Graded> LInfty<E> for ZeroBrackets {
    fn arities(&self) -> Vec<usize> {
        vec![]
    }
    fn bracket(&self, inputs: &[&E]) -> Result<E> {
        Ok(inputs[0].zero_like())
    }
}

/// The closed-form quadratic bracket of the minimal model of minimal BCOV
/// theory, in the Lie convention: `[α, β]_SN` on divergence-free `α, β` of
/// ξ-degree at most `d−1`.
pub fn mbcov_minimal_l2(alpha: &PolyVector, beta: &PolyVector) -> Result<PolyVector> {
    let d = alpha.dim();
    for x in [alpha, beta] {
        if !divergence(x).is_zero() || x.xi_degrees().iter().any(|&j| j + 1 > d) {
            return Err(CoreError::NotInCarrier(x.to_text()));
        }
    }
    schouten(alpha, beta)
}

/// The minimal model of minimal BCOV theory on its carrier, in the shifted
/// convention: `l₂(α, β) = (−1)^{|α|−1}[α, β]_SN` when the output has
/// ξ-degree at most `d−1`, and no other brackets.
#[derive(Debug, Clone, Copy)]
pub struct MbcovMinimal {
    complex: Complex,
}

impl MbcovMinimal {
    pub fn new(d: usize) -> Result<Self> {
        Ok(MbcovMinimal { complex: Complex::new(d, Variant::Mbcov)? })
    }
}

impl LInfty<DescendantField> for MbcovMinimal {
    fn arities(&self) -> Vec<usize> {
        vec![2]
    }

    fn bracket(&self, inputs: &[&DescendantField]) -> Result<DescendantField> {
        let d = self.complex.dim();
        let mut out = DescendantField::zero(d);
        if let [x, y] = inputs {
            self.complex.check_carrier(x)?;
            self.complex.check_carrier(y)?;
            for (ia, a) in x.components() {
                for (ib, b) in y.components() {
                    let j = ia.xi_degree + ib.xi_degree;
                    if j == 0 || j > d {
                        continue;
                    }
                    let v = mbcov_minimal_l2(a, b)?.scale(&sign(ia.xi_degree % 2 == 0));
                    out.add_component(SummandIndex::standard(0, j - 1), &v)?;
                }
            }
        }
        Ok(out)
    }
}

/// Minimal model of the theory with `(d−1)`-potentials on PV^d ⊕ ⊕_{i≤d−2} ker Δ.
///
/// With `u ∈ ker Δ ∩ PV^a`, `v ∈ ker Δ ∩ PV^b` and `γ ∈ PV^d`:
/// - `l₂(u, v) = Δ(uv)` when `a + b ≠ d`,
/// - `l₂(u, v) = uv ∈ PV^d` when `a + b = d`,
/// - `l₂(u, γ) = u Δγ ∈ PV^d` for `a = 1` and `Δ(u Δγ)` for `a = 0`,
/// - all other pairs vanish.
#[derive(Debug, Clone, Copy)]
pub struct PotentialD {
    complex: Complex,
}

/// Builds the `(d−1)`-potential minimal model.
pub fn potential_d_brackets(d: usize) -> Result<PotentialD> {
    if d < 3 {
        return Err(CoreError::InvalidConfig(format!("potential model needs d >= 3, got {d}")));
    }
    Ok(PotentialD { complex: Complex::new(d, Variant::Potential(d - 1))? })
}

impl PotentialD {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    fn pair(&self, ia: &SummandIndex, a: &PolyVector, ib: &SummandIndex, b: &PolyVector) -> Result<Option<(SummandIndex, PolyVector)>> {
        let d = self.complex.dim();
        let top = SummandIndex::potential(0, d);
        Ok(match (ia.tower, ib.tower) {
            (Tower::Standard, Tower::Standard) => {
                let j = ia.xi_degree + ib.xi_degree;
                if j == d {
                    Some((top, a.mul(b)?))
                } else if j == 0 || j > d {
                    None
                } else {
                    Some((SummandIndex::standard(0, j - 1), derived_bracket(a, b)?))
                }
            }
            (Tower::Standard, Tower::Potential) => match ia.xi_degree {
                1 => Some((top, a.mul(&divergence(b))?)),
                0 => Some((SummandIndex::standard(0, d - 2), divergence(&a.mul(&divergence(b))?))),
                _ => None,
            },
            (Tower::Potential, Tower::Standard) => self.pair(ib, b, ia, a)?.map(|(i, v)| {
                let neg = ia.parity(d) && ib.parity(d);
                (i, v.scale(&sign(neg)))
            }),
            _ => None,
        })
    }

    /// The constant-term cocycle: the `ξ_1⋯ξ_d` coefficient at `x = 0` of the
    /// PV^d channel of `l₂`.
    pub fn cocycle(&self, x: &DescendantField, y: &DescendantField) -> Result<Scalar> {
        let v = self.bracket(&[x, y])?;
        Ok(v.component(&SummandIndex::potential(0, self.complex.dim())).top_constant())
    }
}

impl LInfty<DescendantField> for PotentialD {
    fn arities(&self) -> Vec<usize> {
        vec![2]
    }

    fn bracket(&self, inputs: &[&DescendantField]) -> Result<DescendantField> {
        let mut out = DescendantField::zero(self.complex.dim());
        if let [x, y] = inputs {
            self.complex.check_carrier(x)?;
            self.complex.check_carrier(y)?;
            for (ia, a) in x.components() {
                for (ib, b) in y.components() {
                    if let Some((i, v)) = self.pair(ia, a, ib, b)? {
                        out.add_component(i, &v)?;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Minimal model of the theory with `k`-potentials, `2 ≤ k ≤ d−2`.
///
/// The carrier is `C ⊕ PV^{k+1}/Δ PV^{k+2} ⊕ ⊕_{i≠k} ker Δ ∩ PV^i`, with the
/// quotient held by representatives `KΔw`. Writing `Φ` for the identity on
/// `ker Δ` and `Δ` on the quotient, the brackets are
/// - `l₂(x, y) = Δ(Φx Φy)`, read back through `Φ⁻¹ = K` in degree `k`,
/// - `l_N(x_1, …, x_N) = (Φx_1 ⋯ Φx_N)(0) ∨ Ω` into `C`, `N = d−k+1`,
///
/// and the central slot brackets trivially with everything.
#[derive(Debug, Clone, Copy)]
pub struct PotentialK {
    complex: Complex,
    k: usize,
}

/// Builds the `k`-potential minimal model for `2 ≤ k ≤ d−2`.
pub fn potential_k_brackets(d: usize, k: usize) -> Result<PotentialK> {
    if k + 2 > d {
        return Err(CoreError::InvalidConfig(format!(
            "the higher-bracket model needs k <= d-2, got d={d}, k={k}"
        )));
    }
    Ok(PotentialK { complex: Complex::new(d, Variant::Potential(k))?, k })
}

impl PotentialK {
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// Arity of the higher bracket, `d − k + 1`.
    pub fn higher_arity(&self) -> usize {
        self.complex.dim() - self.k + 1
    }

    fn phi(&self, idx: &SummandIndex, mu: &PolyVector) -> Option<PolyVector> {
        match idx.tower {
            Tower::Standard => Some(mu.clone()),
            Tower::Potential => Some(divergence(mu)),
            Tower::Central => None,
        }
    }

    fn phi_degree(&self, idx: &SummandIndex) -> usize {
        match idx.tower {
            Tower::Potential => idx.xi_degree - 1,
            _ => idx.xi_degree,
        }
    }

    fn quadratic(&self, x: &DescendantField, y: &DescendantField) -> Result<DescendantField> {
        let d = self.complex.dim();
        let mut out = DescendantField::zero(d);
        for (ia, a) in x.components() {
            let Some(fa) = self.phi(ia, a) else { continue };
            for (ib, b) in y.components() {
                let Some(fb) = self.phi(ib, b) else { continue };
                let j = self.phi_degree(ia) + self.phi_degree(ib);
                if j == 0 || j > d {
                    continue;
                }
                let v = derived_bracket(&fa, &fb)?;
                if j - 1 == self.k {
                    out.add_component(SummandIndex::potential(0, self.k + 1), &contraction_k(&v))?;
                } else {
                    out.add_component(SummandIndex::standard(0, j - 1), &v)?;
                }
            }
        }
        Ok(out)
    }

    fn higher(&self, inputs: &[&DescendantField]) -> Result<DescendantField> {
        let d = self.complex.dim();
        let mut partial: Vec<PolyVector> = vec![SuperPoly::one(d)];
        for x in inputs {
            let images: Vec<PolyVector> = x.components().filter_map(|(i, m)| self.phi(i, m)).collect();
            let mut next = Vec::new();
            for p in &partial {
                for img in &images {
                    let q = p.mul(img)?;
                    if !q.is_zero() {
                        next.push(q);
                    }
                }
            }
            partial = next;
        }
        let mut total = Scalar::from_integer(0.into());
        for p in partial {
            total += p.top_constant();
        }
        Ok(DescendantField::central(d, total))
    }
}

impl LInfty<DescendantField> for PotentialK {
    fn arities(&self) -> Vec<usize> {
        vec![2, self.higher_arity()]
    }

    fn bracket(&self, inputs: &[&DescendantField]) -> Result<DescendantField> {
        for x in inputs {
            self.complex.check_carrier(x)?;
        }
        match inputs.len() {
            2 => self.quadratic(inputs[0], inputs[1]),
            n if n == self.higher_arity() => self.higher(inputs),
            _ => Ok(DescendantField::zero(self.complex.dim())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::build_datum;
    use crate::superpoly::random_poly_seeded;
    use std::collections::BTreeMap;

    fn p(d: usize, s: &str) -> SuperPoly {
        SuperPoly::parse(d, s).unwrap()
    }

    fn std(d: usize, s: &str) -> DescendantField {
        let mu = p(d, s);
        DescendantField::single(SummandIndex::standard(0, mu.xi_degree().unwrap_or(0)), mu)
    }

    #[test]
    fn set_partition_counts() {
        // Bell numbers minus the one-block partition
        assert_eq!(set_partitions(0b111).len(), 4);
        assert_eq!(set_partitions(0b1111).len(), 14);
        assert_eq!(set_partitions(0b11111).len(), 51);
    }

    #[test]
    fn shifted_schouten_jacobi_examples() {
        let s = ShiftedSchouten { with_differential: true };
        let (a, b, c) = (p(3, "xi1*xi2"), p(3, "x1*xi1"), p(3, "x2"));
        assert!(jacobi_defect(&s, &[&a, &b, &c]).unwrap().is_zero());
        for seed in 0..30 {
            let a = random_poly_seeded(3, 3, Some(seed as usize % 4), seed);
            let b = random_poly_seeded(3, 3, Some((seed as usize + 1) % 4), seed + 100);
            assert!(jacobi_defect(&s, &[&a, &b]).unwrap().is_zero());
        }
    }

    #[test]
    fn mbcov_l2_examples() {
        assert_eq!(mbcov_minimal_l2(&p(3, "xi1"), &p(3, "x1*xi2")).unwrap(), p(3, "xi2"));
        assert!(mbcov_minimal_l2(&p(3, "5"), &p(3, "x1*xi2 + xi3")).unwrap().is_zero());
        assert!(mbcov_minimal_l2(&p(3, "x1*xi1"), &p(3, "xi2")).is_err());
    }

    #[test]
    fn transfer_examples() {
        let datum = build_datum(3, Variant::Mbcov).unwrap();
        let base = BcovDgLie::new(*datum.complex());
        let tr = transfer(&base, &datum, 4).unwrap();
        let (a, b) = (std(3, "xi1*xi2"), std(3, "x1*x2*xi3"));
        let l2 = tr.bracket(&[&a, &b]).unwrap();
        let want = schouten(&p(3, "xi1*xi2"), &p(3, "x1*x2*xi3")).unwrap();
        // shifted l₂ = (−1)^{|α|−1} [α, β]_SN with |α| = 2
        assert_eq!(l2, DescendantField::single(SummandIndex::standard(0, 2), want.neg()));

        let zero = transfer(&ZeroBrackets, &datum, 3).unwrap();
        let c = std(3, "x3*xi1");
        assert!(zero.bracket(&[&a, &b, &c]).unwrap().is_zero());
        assert!(matches!(transfer(&base, &datum, 1), Err(CoreError::ArityCap(1))));
    }

    #[test]
    fn potential_d_families() {
        let s = potential_d_brackets(3).unwrap();
        let top = SummandIndex::potential(0, 3);
        let pot = |t: &str| DescendantField::single(top, p(3, t));
        let l2 = |x: &DescendantField, y: &DescendantField| s.bracket(&[x, y]).unwrap();
        // PV^2 is not in the d = 3 carrier; ξ2ξ3 enters as Δ of the PV^3 element x1ξ1ξ2ξ3
        assert!(s.bracket(&[&std(3, "xi1"), &std(3, "xi2*xi3")]).is_err());
        assert_eq!(l2(&std(3, "xi1"), &pot("x1*xi1*xi2*xi3")), pot("xi1*xi2*xi3"));
        assert_eq!(l2(&std(3, "x2*xi1"), &pot("x1*xi1*xi2*xi3")), pot("x2*xi1*xi2*xi3"));
        assert_eq!(l2(&std(3, "xi1"), &std(3, "x1*xi2")), std(3, "xi2"));

        let s4 = potential_d_brackets(4).unwrap();
        let v = s4.bracket(&[&std(4, "xi1*xi2"), &std(4, "xi3*xi4")]).unwrap();
        assert_eq!(v, DescendantField::single(SummandIndex::potential(0, 4), p(4, "xi1*xi2*xi3*xi4")));
    }

    /// Finite-dimensional toy complex used to pin the edge sign of the
    /// transfer: basis u, v (even), w, u′ (odd), `Qv = w`, `l₂(u,u) = w`,
    /// `l₂(u,v) = u′`, `H w = v`.
    #[derive(Clone, Debug, PartialEq)]
    struct Toy(BTreeMap<usize, Scalar>);

    const U: usize = 0;
    const V: usize = 1;
    const W: usize = 2;
    const U2: usize = 3;

    impl Toy {
        fn basis(i: usize) -> Self {
            Toy(BTreeMap::from([(i, int(1))]))
        }
        fn coeff(&self, i: usize) -> Scalar {
            self.0.get(&i).cloned().unwrap_or_else(|| int(0))
        }
    }

    impl Graded for Toy {
        fn zero_like(&self) -> Self {
            Toy(BTreeMap::new())
        }
        fn add_assign(&mut self, other: &Self) {
            for (k, v) in &other.0 {
                let e = self.0.entry(*k).or_insert_with(|| int(0));
                *e += v;
                if *e == int(0) {
                    self.0.remove(k);
                }
            }
        }
        fn scaled(&self, c: &Scalar) -> Self {
            let mut out = self.zero_like();
            out.add_assign(&Toy(self.0.iter().map(|(k, v)| (*k, v * c)).collect()));
            out
        }
        fn is_zero(&self) -> bool {
            self.0.is_empty()
        }
        fn parity(&self) -> Option<bool> {
            let mut it = self.0.keys().map(|&k| k == W || k == U2);
            let f = it.next()?;
            it.all(|x| x == f).then_some(f)
        }
    }

    struct ToyL;
    impl LInfty<Toy> for ToyL {
        fn arities(&self) -> Vec<usize> {
            vec![1, 2]
        }
        fn bracket(&self, x: &[&Toy]) -> Result<Toy> {
            Ok(match x {
                [a] => Toy::basis(W).scaled(&a.coeff(V)),
                [a, b] => {
                    let mut o = Toy::basis(W).scaled(&(a.coeff(U) * b.coeff(U)));
                    let c = a.coeff(U) * b.coeff(V) + a.coeff(V) * b.coeff(U);
                    o.add_assign(&Toy::basis(U2).scaled(&c));
                    o
                }
                _ => x[0].zero_like(),
            })
        }
    }

    struct ToyRetract;
    impl Retract<Toy> for ToyRetract {
        fn iota(&self, x: &Toy) -> Result<Toy> {
            Ok(x.clone())
        }
        fn proj(&self, x: &Toy) -> Result<Toy> {
            let mut o = Toy::basis(U).scaled(&x.coeff(U));
            o.add_assign(&Toy::basis(U2).scaled(&x.coeff(U2)));
            Ok(o)
        }
        fn homotopy(&self, x: &Toy) -> Result<Toy> {
            Ok(Toy::basis(V).scaled(&x.coeff(W)))
        }
    }

    #[test]
    fn transfer_edge_sign_on_toy_model() {
        let tr = transfer(&ToyL, &ToyRetract, 3).unwrap();
        let u = Toy::basis(U);
        assert!(tr.bracket(&[&u, &u]).unwrap().is_zero());
        assert_eq!(tr.bracket(&[&u, &u, &u]).unwrap(), Toy::basis(U2).scaled(&int(-3)));
    }
}
