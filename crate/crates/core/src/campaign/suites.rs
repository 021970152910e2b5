//! Suite runners. Each takes explicit parameters so that tests can sweep
//! dimensions without going through a full campaign.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{CampaignConfig, CheckRecord, Probe, Suite};
use crate::complexes::{quotient_class, Complex, DescendantField, SummandIndex, Tower, Variant};
use crate::contraction::{build_datum, contraction_k, verify_datum};
use crate::error::Result;
use crate::linf::{
    jacobi_defect, potential_d_brackets, potential_k_brackets, symmetry_defect, transfer, BcovDgLie, LInfty,
    MbcovMinimal,
};
use crate::pvcalc::{derived_bracket, divergence, schouten};
use crate::sho::{
    c1_cocycle, c2_cocycle, cocycle_check, ext_bracket_d3, hamiltonian_vf, kappa, levi_civita, lie_sign, membership,
    principal_degree, random_sho_generator, sho_basis, super_divergence, vf_bracket, ExtElement, Membership,
};
use crate::sl2::{
    equivariance_bullets, equivariance_check_cocycle, equivariance_compare_embedding, gen_dx, gen_dxi, gen_rotation,
    sl2_relations_check, Conventions, Sl2Report,
};
use crate::superpoly::{monomial_basis, random_poly, sign, Monomial, SuperPoly};

pub fn run_suite(suite: Suite, cfg: &CampaignConfig) -> Result<Vec<CheckRecord>> {
    let seed = suite_seed(cfg.seed, suite);
    let (d, deg, n) = (cfg.d, cfg.max_degree, cfg.trials);
    match suite {
        Suite::Algebra => algebra(d, deg, n, seed),
        Suite::Contraction => contraction(d, deg, n, seed),
        Suite::Homotopy => homotopy(d, cfg.variant, deg, n, seed),
        Suite::Transfer if cfg.variant == Variant::Mbcov => transfer_suite(d, deg, n, seed, cfg.arity_cap),
        Suite::Transfer => Ok(Vec::new()),
        Suite::Jacobi => jacobi(d, cfg.variant, deg, n, seed),
        Suite::Sho => sho(d, deg, n, seed),
        Suite::Cocycle if d == 3 => cocycle(n, seed),
        Suite::Sl2 if d == 3 => sl2(n, seed),
        Suite::Cocycle | Suite::Sl2 => Ok(Vec::new()),
    }
}

/// Independent seed per suite, stable across releases.
fn suite_seed(seed: u64, suite: Suite) -> u64 {
    let h = Sha256::digest(format!("{seed}/{}", suite.name()).as_bytes());
    u64::from_le_bytes(h[..8].try_into().expect("8 bytes"))
}

fn params_record(suite: Suite, name: String, anchor: &str, params: &str, samples: usize, failures: usize, witness: Option<String>) -> CheckRecord {
    let mut h = Sha256::new();
    h.update(name.as_bytes());
    h.update(b"\n");
    h.update(params.as_bytes());
    let passed = failures == 0 && samples > 0;
    CheckRecord {
        suite,
        name,
        anchor: anchor.into(),
        inputs_hash: hex::encode(h.finalize()),
        samples,
        nontrivial: None,
        failures,
        passed,
        required: true,
        witness: witness.or_else(|| (!passed).then(|| "no samples".to_string())),
    }
}

/// A polynomial of one random ξ-degree in `0..=max_xi`.
fn homogeneous(rng: &mut ChaCha8Rng, d: usize, deg: u32, max_xi: usize) -> SuperPoly {
    let j = rng.gen_range(0..=max_xi);
    random_poly(rng, d, deg.max(j as u32), Some(j))
}

/// ξ-degree of a homogeneous polyvector; zero counts as even.
fn xdeg(p: &SuperPoly) -> usize {
    p.xi_degree().unwrap_or(0)
}

pub fn algebra(d: usize, deg: u32, trials: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Suite::Algebra;
    let mut sq = Probe::new(s, format!("delta squares to zero (d={d})"), "Δ∘Δ = 0");
    let mut anti = Probe::new(s, format!("shifted antisymmetry (d={d})"), "[a,b] = −(−1)^{(|a|−1)(|b|−1)}[b,a]");
    let mut jac = Probe::new(
        s,
        format!("shifted jacobi (d={d})"),
        "[a,[b,c]] = [[a,b],c] + (−1)^{(|a|−1)(|b|−1)}[b,[a,c]]",
    );
    let mut der = Probe::new(s, format!("delta is a shifted derivation (d={d})"), "Δ[a,b] = [Δa,b] + (−1)^{|a|−1}[a,Δb]");
    let mut second = Probe::new(
        s,
        format!("second-order identity (d={d})"),
        "Δ(ab) = (Δa)b + (−1)^{|a|}aΔb + (−1)^{|a|−1}[a,b]",
    );
    for _ in 0..trials {
        let a = homogeneous(&mut rng, d, deg, d);
        let b = homogeneous(&mut rng, d, deg, d);
        let c = homogeneous(&mut rng, d, deg, d);
        let (pa, pb) = (xdeg(&a), xdeg(&b));
        for p in [&a, &b, &c] {
            let t = p.to_text();
            for probe in [&mut sq, &mut anti, &mut jac, &mut der, &mut second] {
                probe.input(&t);
            }
        }
        let w = || format!("a = {a}; b = {b}; c = {c}");

        let da = divergence(&a);
        sq.check(divergence(&da).is_zero(), !da.is_zero(), w);

        let ab = schouten(&a, &b)?;
        let ba = schouten(&b, &a)?;
        let eps_ab = sign((pa + 1) % 2 == 1 && (pb + 1) % 2 == 1);
        anti.check(ab == ba.scale(&-eps_ab.clone()), !ab.is_zero(), w);

        let lhs = schouten(&a, &schouten(&b, &c)?)?;
        let rhs = schouten(&ab, &c)?.add(&schouten(&b, &schouten(&a, &c)?)?.scale(&eps_ab))?;
        jac.check(lhs == rhs, !lhs.is_zero() || !rhs.is_zero(), w);

        let lhs = divergence(&ab);
        let rhs = schouten(&da, &b)?.add(&schouten(&a, &divergence(&b))?.scale(&sign(pa % 2 == 0)))?;
        der.check(lhs == rhs, !lhs.is_zero(), w);

        let prod = a.mul(&b)?;
        let lhs = divergence(&prod);
        let rhs = da
            .mul(&b)?
            .add(&a.mul(&divergence(&b))?.scale(&sign(pa % 2 == 1)))?
            .add(&ab.scale(&sign(pa % 2 == 0)))?;
        second.check(lhs == rhs, !ab.is_zero(), w);
        // the Schouten bracket is the defect of Δ being a derivation
        debug_assert_eq!(derived_bracket(&a, &b)?, ab.scale(&sign(pa % 2 == 0)));
    }
    Ok([sq, anti, jac, der, second].into_iter().map(Probe::finish).collect())
}

pub fn contraction(d: usize, deg: u32, trials: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Suite::Contraction;
    let mut rel = Probe::new(s, format!("contraction homotopy on xi-degrees 0..d-1 (d={d})"), "ΔK + KΔ = id on PV^j, j < d")
        .needs_nontrivial(1);
    let mut top = Probe::new(s, format!("contraction top output has no constant term (d={d})"), "(K μ^{d−1}) has zero ξ1⋯ξd coefficient");
    for _ in 0..trials {
        let mu = homogeneous(&mut rng, d, deg, d - 1);
        rel.input(&mu.to_text());
        let lhs = divergence(&contraction_k(&mu)).add(&contraction_k(&divergence(&mu)))?;
        rel.check(lhs == mu, !mu.is_zero(), || format!("mu = {mu}"));

        let nu = random_poly(&mut rng, d, deg.max(d as u32 - 1), Some(d - 1));
        top.input(&nu.to_text());
        let k = contraction_k(&nu);
        top.check(k.top_constant().is_zero(), !k.is_zero(), || format!("mu = {nu}"));
    }
    Ok(vec![rel.finish(), top.finish()])
}

pub fn homotopy(d: usize, variant: Variant, deg: u32, trials: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let s = Suite::Homotopy;
    let datum = build_datum(d, variant)?;
    let report = verify_datum(&datum, trials, deg, seed)?;
    let params = format!("d={d} variant={variant} deg={deg} budget={trials} seed={seed}");
    let mut out: Vec<CheckRecord> = report
        .summands
        .iter()
        .map(|c| {
            params_record(
                s,
                format!("homotopy datum on {} ({variant}, d={d})", c.summand),
                "pι = id and id − ιp = QH + HQ",
                &params,
                c.samples,
                c.relation_failures + c.retraction_failures,
                c.witness.clone(),
            )
        })
        .collect();
    let sc = &report.side_conditions;
    for (name, ok) in [("H∘H = 0", sc.h_squared_zero), ("H∘ι = 0", sc.h_iota_zero), ("p∘H = 0", sc.p_h_zero)] {
        let mut r = params_record(s, format!("side condition {name} ({variant}, d={d})"), name, &params, 1, usize::from(!ok), None);
        r.required = false;
        if !ok {
            r.witness = Some("measured on the sampled fields".into());
        }
        out.push(r);
    }
    Ok(out)
}

/// A nonzero seeded element of a random carrier summand.
fn carrier_sample(c: &Complex, rng: &mut ChaCha8Rng, deg: u32) -> Result<DescendantField> {
    let idx = c.carrier_summands();
    loop {
        let i = idx[rng.gen_range(0..idx.len())];
        let cap = (i.xi_degree as u32 + rng.gen_range(0..=2)).min(deg.max(i.xi_degree as u32));
        let x = c.random_carrier_element(rng, &i, cap)?;
        if !x.is_zero() {
            return Ok(x);
        }
    }
}

fn texts(xs: &[DescendantField]) -> String {
    xs.iter().map(|x| x.to_text()).collect::<Vec<_>>().join("; ")
}

pub fn transfer_suite(d: usize, deg: u32, trials: usize, seed: u64, arity_cap: usize) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Suite::Transfer;
    let datum = build_datum(d, Variant::Mbcov)?;
    let base = BcovDgLie::new(*datum.complex());
    let tr = transfer(&base, &datum, arity_cap)?;
    let closed = MbcovMinimal::new(d)?;
    let mut out = Vec::new();
    for n in 2..=arity_cap {
        let (name, anchor) = if n == 2 {
            (format!("transferred l2 is the Schouten bracket (d={d})"), "l₂ = [−,−]_SN on divergence-free inputs")
        } else {
            (format!("transferred l{n} vanishes (d={d})"), "l_n = 0 for n ≥ 3")
        };
        let mut p = Probe::new(s, name, anchor);
        for _ in 0..trials {
            let xs: Vec<DescendantField> = (0..n).map(|_| carrier_sample(datum.complex(), &mut rng, deg)).collect::<Result<_>>()?;
            p.input(&texts(&xs));
            let r: Vec<&DescendantField> = xs.iter().collect();
            let got = tr.bracket(&r)?;
            let want = if n == 2 { closed.bracket(&r)? } else { DescendantField::zero(d) };
            p.check(got == want, !got.is_zero(), || format!("{} -> {}", texts(&xs), got.to_text()));
        }
        out.push(p.finish());
    }
    Ok(out)
}

/// Random composition of `total` into `parts` entries bounded by `max`.
fn composition(rng: &mut ChaCha8Rng, total: usize, parts: usize, max: usize) -> Option<Vec<usize>> {
    if total > parts * max {
        return None;
    }
    let mut v = vec![0; parts];
    for _ in 0..total {
        let open: Vec<usize> = (0..parts).filter(|&i| v[i] < max).collect();
        v[*open.choose(rng).expect("capacity checked")] += 1;
    }
    Some(v)
}

/// Carrier representative of the closed polyvector `m` in the `k`-potential
/// model; potentials stand in for PV^k.
fn carrier_rep(k: usize, m: SuperPoly) -> DescendantField {
    let j = xdeg(&m);
    if j == k {
        DescendantField::single(SummandIndex::potential(0, k + 1), quotient_class(&contraction_k(&m)))
    } else {
        DescendantField::single(SummandIndex::standard(0, j), m)
    }
}

/// Sample with Φ-image of ξ-degree `j` and low x-degree for the `k`-potential
/// model.
pub fn phi_graded_sample(c: &Complex, k: usize, j: usize, rng: &mut ChaCha8Rng) -> Result<DescendantField> {
    loop {
        let (idx, cap) = if j == k {
            (SummandIndex::potential(0, k + 1), (k + 2) as u32 + rng.gen_range(0..=1))
        } else {
            (SummandIndex::standard(0, j), j as u32 + rng.gen_range(0..=2))
        };
        let x = c.random_carrier_element(rng, &idx, cap)?;
        if !x.is_zero() {
            return Ok(x);
        }
    }
}

/// `n` monomial carrier inputs whose Φ-images use every ξ once except for
/// one repeated index `b`, with `x_b` attached to an input free of `ξ_b`.
/// Such tuples feed `l_N(l_2(x_b ξ_I, ξ_b ξ_J), …)` with a nonzero top
/// constant. Returns `None` when the draw is degenerate.
pub fn monomial_carrier_sample(c: &Complex, k: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<DescendantField>> {
    monomial_tuple(c, k, n, rng, true)
}

/// `n` x-free monomial carrier inputs whose Φ-images partition the ξ's, so
/// that `l_N` of them is a unit.
pub fn monomial_top_sample(c: &Complex, k: usize, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<DescendantField>> {
    monomial_tuple(c, k, n, rng, false)
}

fn monomial_tuple(c: &Complex, k: usize, n: usize, rng: &mut ChaCha8Rng, repeat: bool) -> Option<Vec<DescendantField>> {
    let d = c.dim();
    let mut seq: Vec<usize> = (1..=d).collect();
    seq.shuffle(rng);
    let b = seq[rng.gen_range(0..d)];
    if repeat {
        seq.insert(rng.gen_range(0..=d), b);
    }
    let degs = composition(rng, seq.len(), n, d - 1)?;
    let mut blocks = Vec::with_capacity(n);
    let mut pos = 0;
    for j in degs {
        let mut blk = seq[pos..pos + j].to_vec();
        pos += j;
        blk.sort_unstable();
        if blk.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        blocks.push(blk);
    }
    // x_b goes on a block without ξ_b so that every input stays closed
    let carrier = if repeat {
        let others: Vec<usize> = (0..n).filter(|&i| !blocks[i].contains(&b)).collect();
        Some(*others.choose(rng)?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(n);
    for (i, blk) in blocks.iter().enumerate() {
        let mut exps = vec![0u32; d];
        if carrier == Some(i) {
            exps[b - 1] = 1;
        }
        let m = Monomial::from_parts(exps, blk)?;
        out.push(carrier_rep(k, SuperPoly::monomial(m, crate::superpoly::int(1))));
    }
    Some(out)
}

/// Whether some `l_{n−1}(l_2(x_i, x_j), rest)` is nonzero.
fn has_nested_term<S: LInfty<DescendantField>>(s: &S, xs: &[DescendantField]) -> Result<bool> {
    let n = xs.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let inner = s.bracket(&[&xs[i], &xs[j]])?;
            if inner.is_zero() {
                continue;
            }
            let mut args: Vec<&DescendantField> = vec![&inner];
            args.extend((0..n).filter(|&t| t != i && t != j).map(|t| &xs[t]));
            if !s.bracket(&args)?.is_zero() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

fn jacobi_probe<S: LInfty<DescendantField>>(p: &mut Probe, s: &S, xs: &[DescendantField]) -> Result<()> {
    p.input(&texts(xs));
    let r: Vec<&DescendantField> = xs.iter().collect();
    let def = jacobi_defect(s, &r)?;
    let nested = has_nested_term(s, xs)?;
    p.check(def.is_zero(), nested, || format!("{} -> defect {}", texts(xs), def.to_text()));
    Ok(())
}

fn symmetry_probe<S: LInfty<DescendantField>>(p: &mut Probe, s: &S, xs: &[DescendantField]) -> Result<()> {
    p.input(&texts(xs));
    let r: Vec<&DescendantField> = xs.iter().collect();
    let nontrivial = !s.bracket(&r)?.is_zero();
    let mut ok = true;
    for a in 0..xs.len().saturating_sub(1) {
        ok &= symmetry_defect(s, &r, a, a + 1)?.is_zero();
    }
    p.check(ok, nontrivial, || texts(xs));
    Ok(())
}

pub fn jacobi(d: usize, variant: Variant, deg: u32, trials: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Suite::Jacobi;
    let tag = format!("{variant}, d={d}");
    let triples = |c: &Complex, rng: &mut ChaCha8Rng| -> Result<Vec<DescendantField>> {
        (0..3).map(|_| carrier_sample(c, rng, deg)).collect()
    };
    match variant {
        Variant::Mbcov => {
            let m = MbcovMinimal::new(d)?;
            let c = Complex::new(d, variant)?;
            let mut jac = Probe::new(s, format!("minimal model jacobi ({tag})"), "Jacobi identity of the minimal bracket");
            let mut sym = Probe::new(s, format!("minimal model graded symmetry ({tag})"), "l₂ graded symmetric");
            for _ in 0..trials {
                let xs = triples(&c, &mut rng)?;
                jacobi_probe(&mut jac, &m, &xs)?;
                symmetry_probe(&mut sym, &m, &xs[..2])?;
            }
            Ok(vec![jac.finish(), sym.finish()])
        }
        Variant::Potential(k) if k + 1 == d => {
            let m = potential_d_brackets(d)?;
            let mut jac = Probe::new(s, format!("three bracket families satisfy jacobi ({tag})"), "super-Jacobi of the three bracket families")
                .needs_nontrivial(1);
            let mut coc = Probe::new(s, format!("constant-term cocycle identity ({tag})"), "cocycle(l₂(a,b),c) summed over unshuffles = 0")
                .needs_nontrivial(1);
            let mut sym = Probe::new(s, format!("graded symmetry ({tag})"), "l₂ graded symmetric");
            for _ in 0..trials {
                let xs = triples(m.complex(), &mut rng)?;
                jacobi_probe(&mut jac, &m, &xs)?;
                symmetry_probe(&mut sym, &m, &xs[..2])?;
                // central elements bracket to zero, so the central part of the
                // defect is exactly the cocycle identity
                coc.input(&texts(&xs));
                let r: Vec<&DescendantField> = xs.iter().collect();
                let def = jacobi_defect(&m, &r)?;
                let mut nontrivial = false;
                for (i, j, t) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
                    let inner = m.bracket(&[r[i], r[j]])?;
                    nontrivial |= !m.cocycle(&inner, r[t])?.is_zero();
                }
                coc.check(def.central_value().is_zero(), nontrivial, || texts(&xs));
            }
            Ok(vec![jac.finish(), coc.finish(), sym.finish()])
        }
        Variant::Potential(k) => {
            let m = potential_k_brackets(d, k)?;
            let c = *m.complex();
            let top = m.higher_arity();
            let mut out = Vec::new();
            for n in 2..=top + 1 {
                let mut jac = Probe::new(
                    s,
                    format!("generalized jacobi at arity {n} ({tag})"),
                    "Σ ± l_a(l_b(…),…) = 0 over a + b = n + 1",
                );
                if n == top + 1 {
                    jac = jac.needs_nontrivial(1);
                }
                for t in 0..trials {
                    let xs = if t % 2 == 1 && n >= top {
                        loop {
                            if let Some(v) = monomial_carrier_sample(&c, k, n, &mut rng) {
                                break v;
                            }
                        }
                    } else {
                        (0..n).map(|_| carrier_sample(&c, &mut rng, deg)).collect::<Result<_>>()?
                    };
                    jacobi_probe(&mut jac, &m, &xs)?;
                }
                out.push(jac.finish());
            }
            let mut central = Probe::new(s, format!("l{top} lands in the central slot ({tag})"), "l_{d−k+1} outputs are central scalars")
                .needs_nontrivial(1);
            let mut sym = Probe::new(s, format!("l{top} graded symmetry ({tag})"), "l_{d−k+1} graded symmetric");
            for t in 0..trials {
                let xs: Vec<DescendantField> = if t % 2 == 1 {
                    loop {
                        if let Some(v) = monomial_top_sample(&c, k, top, &mut rng) {
                            break v;
                        }
                    }
                } else {
                    let degs = composition(&mut rng, d, top, d - 1).expect("d ≤ N(d−1)");
                    degs.iter().map(|&j| phi_graded_sample(&c, k, j, &mut rng)).collect::<Result<_>>()?
                };
                central.input(&texts(&xs));
                let r: Vec<&DescendantField> = xs.iter().collect();
                let v = m.bracket(&r)?;
                let ok = v.indices().iter().all(|i| i.tower == Tower::Central);
                central.check(ok, !v.is_zero(), || format!("{} -> {}", texts(&xs), v.to_text()));
                symmetry_probe(&mut sym, &m, &xs)?;
            }
            out.push(central.finish());
            out.push(sym.finish());
            Ok(out)
        }
    }
}

pub fn sho(d: usize, deg: u32, trials: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = Suite::Sho;
    let mut square = Probe::new(s, format!("divergence of hamiltonian fields (d={d})"), "D(Ham f) = κ_{|f|} Δf")
        .needs_nontrivial(1);
    let mut kernel = Probe::new(s, format!("kernel equivalence (d={d})"), "D(Ham f) = 0 ⇔ Δf = 0").needs_nontrivial(1);
    let mut lie = Probe::new(s, format!("hamiltonian map is a lie map (d={d})"), "[Ham f, Ham g] = σ Ham([f,g]_SN)")
        .needs_nontrivial(1);
    let mut grading = Probe::new(s, format!("principal grading is additive (d={d})"), "deg [f,g] = deg f + deg g");
    for t in 0..trials {
        let f = homogeneous(&mut rng, d, deg, d);
        // every other sample is closed so both sides of the equivalence occur
        let f = if t % 2 == 0 { f } else { crate::contraction::closed_part(&f) };
        let g = homogeneous(&mut rng, d, deg, d);
        let odd = xdeg(&f) % 2 == 1;
        for p in [&mut square, &mut kernel] {
            p.input(&f.to_text());
        }
        let dh = super_divergence(&hamiltonian_vf(&f));
        let df = divergence(&f);
        square.check(dh == df.scale(&kappa(odd)), !df.is_zero(), || format!("f = {f}"));
        kernel.check(dh.is_zero() == df.is_zero(), df.is_zero() && !f.is_zero(), || format!("f = {f}"));

        lie.input(&format!("{f}; {g}"));
        let lhs = vf_bracket(&hamiltonian_vf(&f), &hamiltonian_vf(&g))?;
        let fg = schouten(&f, &g)?;
        let rhs = hamiltonian_vf(&fg).scale(&lie_sign(odd, xdeg(&g) % 2 == 1));
        lie.check(lhs == rhs, !lhs.is_zero(), || format!("f = {f}; g = {g}"));

        // homogeneous pieces in the principal grading
        let mf = monomial_piece(&f, &mut rng);
        let mg = monomial_piece(&g, &mut rng);
        if let (Some(a), Some(b)) = (mf, mg) {
            grading.input(&format!("{a}; {b}"));
            let br = schouten(&a, &b)?;
            let ok = br.is_zero() || principal_degree(&br) == Some(principal_degree(&a).expect("monomial") + principal_degree(&b).expect("monomial"));
            grading.check(ok, !br.is_zero(), || format!("f = {a}; g = {b}"));
        }
    }
    let mut member = Probe::new(s, format!("membership matches the top-monomial criterion (d={d})"), "HO ⊃ SHO′ ⊃ SHO on all monomials of degree ≤ max(5, d)")
        .needs_nontrivial(1);
    let top = Monomial::top(d);
    // through degree d so that the top monomial is always enumerated
    for m in monomial_basis(d, 5.max(d as u32)) {
        let f = SuperPoly::monomial(m.clone(), crate::superpoly::int(1));
        member.input(&f.to_text());
        // Δ of a monomial vanishes iff no ξ_i meets a positive power of x_i
        let closed = !m.odd_indices().iter().any(|&i| m.exps()[i - 1] > 0);
        let want = if m.is_one() {
            Membership::NotHoGenerator
        } else if !closed {
            Membership::Ho
        } else if m == top {
            Membership::ShoPrime
        } else {
            Membership::Sho
        };
        let got = membership(&f);
        let dfree = super_divergence(&hamiltonian_vf(&f)).is_zero();
        member.check(got == want && (m.is_one() || dfree == closed), want == Membership::ShoPrime, || format!("f = {f}: {got:?}"));
    }
    Ok(vec![square.finish(), kernel.finish(), lie.finish(), grading.finish(), member.finish()])
}

fn monomial_piece(f: &SuperPoly, rng: &mut ChaCha8Rng) -> Option<SuperPoly> {
    let terms: Vec<_> = f.terms().collect();
    let (m, c) = terms.choose(rng)?;
    Some(SuperPoly::monomial((*m).clone(), (*c).clone()))
}

type Cocycle = dyn Fn(&SuperPoly, &SuperPoly) -> Result<crate::superpoly::Scalar>;

/// Extension-cocycle checks for SHO(3|3).
pub fn cocycle(trials: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let s = Suite::Cocycle;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let low: Vec<SuperPoly> = (-1..=0).flat_map(|n| sho_basis(3, n)).collect();
    let basis: Vec<SuperPoly> = (-1..=1).flat_map(|n| sho_basis(3, n)).collect();
    let mut out = Vec::new();
    let cocycles: [(&str, &str, &Cocycle); 2] = [
        ("top pairing cocycle c1", "c₁(f,g) = ±(fg)(0) ∨ Ω is a 2-cocycle", &c1_cocycle),
        ("constant term cocycle c2", "c₂(f,g) = [f,g](0) is a 2-cocycle", &c2_cocycle),
    ];
    for (name, anchor, c) in cocycles {
        // every triple in principal degrees ≤ 0, then seeded triples through degree 1
        for (label, pool, n) in [("all triples, principal degree <= 0", &low, low.len().pow(3)), ("seeded triples, principal degree <= 1", &basis, trials)] {
            let r = cocycle_check(name, c, pool, n, seed)?;
            let params = format!("{label}, trials={n}, seed={seed}");
            let mut rec = params_record(s, format!("{name} ({label})"), anchor, &params, r.samples, r.failures, r.witness);
            rec.nontrivial = Some(r.nontrivial);
            out.push(rec);
        }
    }

    let mut jac = Probe::new(s, "extension super-jacobi", "the central extension is a Lie superalgebra").needs_nontrivial(1);
    let mut centre = Probe::new(s, "centre brackets to zero", "[e_i, −] = 0");
    let pool: Vec<SuperPoly> = basis.iter().cloned().chain((0..40).map(|_| random_sho_generator(&mut rng, 3, 4))).filter(|g| !g.is_zero()).collect();
    let ext = |g: &SuperPoly| ExtElement::from_generator(g);
    for _ in 0..trials {
        let (a, b, c) = (ext(pool.choose(&mut rng).expect("pool"))?, ext(pool.choose(&mut rng).expect("pool"))?, ext(pool.choose(&mut rng).expect("pool"))?);
        jac.input(&format!("{}; {}; {}", a.to_text(), b.to_text(), c.to_text()));
        let mut ok = true;
        let mut nontrivial = false;
        for (a, b, c) in split3(&a, &b, &c) {
            let pa = a.parity().expect("homogeneous");
            let pb = b.parity().expect("homogeneous");
            let lhs = ext_bracket_d3(&a, &ext_bracket_d3(&b, &c)?)?;
            let rhs = ext_bracket_d3(&ext_bracket_d3(&a, &b)?, &c)?.add(&ext_bracket_d3(&b, &ext_bracket_d3(&a, &c)?)?.scale(&sign(pa && pb)));
            ok &= lhs == rhs;
            nontrivial |= !lhs.is_zero();
        }
        jac.check(ok, nontrivial, || format!("{}; {}; {}", a.to_text(), b.to_text(), c.to_text()));

        centre.input(&a.to_text());
        let z1 = ext_bracket_d3(&ExtElement::e1(), &a)?;
        let z2 = ext_bracket_d3(&a, &ExtElement::e2())?;
        centre.check(z1.is_zero() && z2.is_zero(), false, || a.to_text());
    }
    out.push(jac.finish());
    out.push(centre.finish());

    for i in 1..=3 {
        for (j, k) in [(1, 2), (1, 3), (2, 3), (2, 1), (3, 1), (3, 2)] {
            let name = format!("[dx{i}, xi{k}dx{j} - xi{j}dx{k}] = eps({i}{j}{k}) e1");
            let mut p = Probe::new(s, name, "[∂_{x_i}, ξ_k∂_{x_j} − ξ_j∂_{x_k}] = ε_{ijk} e₁");
            let got = ext_bracket_d3(&ext(&gen_dx(i))?, &ext(&gen_rotation(j, k))?)?;
            let want = ExtElement::e1().scale(&crate::superpoly::int(levi_civita(i, j, k)));
            p.input(&format!("{i} {j} {k}"));
            p.check(got == want, !want.is_zero(), || format!("got {}", got.to_text()));
            out.push(p.finish());
        }
        for j in 1..=3 {
            let name = format!("[dxi{i}, dx{j}] = delta({i}{j}) e2");
            let mut p = Probe::new(s, name, "[∂_{ξ_i}, ∂_{x_j}] = δ_{ij} e₂");
            let got = ext_bracket_d3(&ext(&gen_dxi(i))?, &ext(&gen_dx(j))?)?;
            let want = if i == j { ExtElement::e2() } else { ExtElement::zero() };
            p.input(&format!("{i} {j}"));
            p.check(got == want, i == j, || format!("got {}", got.to_text()));
            out.push(p.finish());
        }
    }
    Ok(out)
}

/// Parity-homogeneous parts of three elements, all combinations.
fn split3(a: &ExtElement, b: &ExtElement, c: &ExtElement) -> Vec<(ExtElement, ExtElement, ExtElement)> {
    let parts = |x: &ExtElement| {
        let (e, o) = x.parity_parts();
        [e, o].into_iter().filter(|p| !p.is_zero()).collect::<Vec<_>>()
    };
    let mut out = Vec::new();
    for x in parts(a) {
        for y in parts(b) {
            for z in parts(c) {
                out.push((x.clone(), y.clone(), z.clone()));
            }
        }
    }
    out
}

fn sl2_records(out: &mut Vec<CheckRecord>, report: &Sl2Report, anchor: &str, params: &str) {
    out.extend(report.checks.iter().map(|t| CheckRecord::from_tally(Suite::Sl2, t, anchor, params)));
}

pub fn sl2(trials: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    let conv = Conventions::default();
    let mut out = Vec::new();
    let params = format!("trials={trials}, seed={seed}");
    sl2_records(&mut out, &sl2_relations_check(&conv, 4, trials, seed)?, "derivation property and sl₂ relations", &params);
    for case in equivariance_bullets(&conv)? {
        let mut p = Probe::new(Suite::Sl2, format!("bullet {}", case.id), "equivariance bullet for the cocycle values");
        p.input(&case.id);
        p.check(case.passed(), !case.expected.is_zero(), || {
            format!("lhs {}, rhs {}, expected {}", case.lhs.to_text(), case.rhs.to_text(), case.expected.to_text())
        });
        out.push(p.finish());
    }
    sl2_records(&mut out, &equivariance_check_cocycle(&conv, trials, seed)?, "sl₂ preserves the extension cocycles", &params);
    sl2_records(
        &mut out,
        &equivariance_compare_embedding(&conv, 4, trials, seed)?,
        "embedding into fields intertwines the sl₂ actions",
        &params,
    );
    Ok(out)
}
