use minbcov::complexes::{Complex, DescendantField, SummandIndex, Variant};
use minbcov::contraction::build_datum;
use minbcov::linf::{
    jacobi_defect, potential_d_brackets, potential_k_brackets, symmetry_defect, transfer, BcovDgLie, LInfty,
    MbcovMinimal,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sample(c: &Complex, rng: &mut ChaCha8Rng, deg: u32) -> DescendantField {
    let idx = c.carrier_summands();
    let i = idx[rng.gen_range(0..idx.len())];
    let cap = (i.xi_degree as u32 + rng.gen_range(0..=2)).min(deg.max(i.xi_degree as u32));
    c.random_carrier_element(rng, &i, cap).unwrap()
}

fn nonzero_samples(c: &Complex, rng: &mut ChaCha8Rng, deg: u32, n: usize) -> Vec<DescendantField> {
    let mut out = Vec::new();
    while out.len() < n {
        let x = sample(c, rng, deg);
        if !x.is_zero() {
            out.push(x);
        }
    }
    out
}

#[test]
fn mbcov_transfer_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for d in [2usize, 3] {
        let datum = build_datum(d, Variant::Mbcov).unwrap();
        let base = BcovDgLie::new(*datum.complex());
        let tr = transfer(&base, &datum, 4).unwrap();
        let closed = MbcovMinimal::new(d).unwrap();
        for _ in 0..40 {
            let xs = nonzero_samples(datum.complex(), &mut rng, 4, 4);
            let r: Vec<&DescendantField> = xs.iter().collect();
            assert_eq!(tr.bracket(&r[..2]).unwrap(), closed.bracket(&r[..2]).unwrap());
            assert!(tr.bracket(&r[..3]).unwrap().is_zero());
            assert!(tr.bracket(&r).unwrap().is_zero());
        }
    }
}

#[test]
fn potential_d_is_lie() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in [3usize, 4] {
        let s = potential_d_brackets(d).unwrap();
        let mut nonzero_cocycle = 0;
        for _ in 0..120 {
            let xs = nonzero_samples(s.complex(), &mut rng, 6, 3);
            let r: Vec<&DescendantField> = xs.iter().collect();
            assert!(jacobi_defect(&s, &r).unwrap().is_zero(), "d={d} {:?}", xs.iter().map(|x| x.to_text()).collect::<Vec<_>>());
            assert!(symmetry_defect(&s, &r[..2], 0, 1).unwrap().is_zero());
            if s.cocycle(r[0], r[1]).unwrap() != minbcov::superpoly::int(0) {
                nonzero_cocycle += 1;
            }
        }
        println!("d={d} nonzero cocycle samples {nonzero_cocycle}");
    }
}

/// Carrier sample whose image under Φ has ξ-degree `j`, with low x-degree.
fn phi_graded(c: &Complex, k: usize, j: usize, rng: &mut ChaCha8Rng) -> DescendantField {
    loop {
        let (idx, cap) = if j == k {
            (SummandIndex::potential(0, k + 1), (k + 2) as u32 + rng.gen_range(0..=1))
        } else {
            (SummandIndex::standard(0, j), j as u32 + rng.gen_range(0..=2))
        };
        let x = c.random_carrier_element(rng, &idx, cap).unwrap();
        if !x.is_zero() {
            return x;
        }
    }
}

fn composition(rng: &mut ChaCha8Rng, total: usize, parts: usize, max: usize) -> Vec<usize> {
    loop {
        let mut v: Vec<usize> = (0..parts).map(|_| rng.gen_range(0..=max)).collect();
        let s: usize = v.iter().sum();
        if s == total {
            return v;
        }
        if s < total {
            let i = rng.gen_range(0..parts);
            v[i] += total - s;
            if v[i] <= max {
                return v;
            }
        }
    }
}

#[test]
fn potential_k_targeted() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    for (d, k) in [(4usize, 2usize), (5, 2)] {
        let s = potential_k_brackets(d, k).unwrap();
        let n = s.higher_arity();
        let (mut hits, mut rel_hits) = (0, 0);
        for _ in 0..60 {
            let degs = composition(&mut rng, d, n, d - 1);
            let xs: Vec<_> = degs.iter().map(|&j| phi_graded(s.complex(), k, j, &mut rng)).collect();
            let r: Vec<&DescendantField> = xs.iter().collect();
            if !s.bracket(&r).unwrap().is_zero() { hits += 1; }
            let degs = composition(&mut rng, d + 1, n + 1, d - 1);
            let xs: Vec<_> = degs.iter().map(|&j| phi_graded(s.complex(), k, j, &mut rng)).collect();
            let r: Vec<&DescendantField> = xs.iter().collect();
            let def = jacobi_defect(&s, &r).unwrap();
            assert!(def.is_zero(), "d={d} {:?} -> {}", xs.iter().map(|x| x.to_text()).collect::<Vec<_>>(), def.to_text());
            // nontrivial if some l_N(l_2(..), ..) term is nonzero
            let inner = s.bracket(&[r[0], r[1]]).unwrap();
            if !inner.is_zero() {
                let mut rest = vec![&inner];
                rest.extend(&r[2..]);
                if !s.bracket(&rest).unwrap().is_zero() { rel_hits += 1; }
            }
        }
        println!("({d},{k}) higher hits {hits}, relation hits {rel_hits}");
    }
}

#[test]
fn potential_k_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (d, k) in [(4usize, 2usize), (5, 2)] {
        let s = potential_k_brackets(d, k).unwrap();
        let n_max = s.higher_arity() + 1;
        let mut hits = 0;
        for _ in 0..60 {
            for n in 2..=n_max {
                let xs = nonzero_samples(s.complex(), &mut rng, 6, n);
                let r: Vec<&DescendantField> = xs.iter().collect();
                let def = jacobi_defect(&s, &r).unwrap();
                assert!(def.is_zero(), "d={d} n={n} {:?} -> {}", xs.iter().map(|x| x.to_text()).collect::<Vec<_>>(), def.to_text());
                if n == s.higher_arity() && !s.bracket(&r).unwrap().is_zero() { hits += 1; }
            }
        }
        println!("({d},{k}) nonzero higher {hits}");
    }
}

#[test]
fn potential_k_example() {
    let d = 4;
    let s = potential_k_brackets(4, 2).unwrap();
    let p = |t: &str| minbcov::SuperPoly::parse(d, t).unwrap();
    let a = DescendantField::single(SummandIndex::standard(0, 1), p("xi1"));
    let b = DescendantField::single(SummandIndex::standard(0, 1), p("xi3"));
    let q = DescendantField::single(
        SummandIndex::potential(0, 3),
        minbcov::complexes::quotient_class(&p("x3*xi2*xi3*xi4")),
    );
    let v = s.bracket(&[&a, &b, &q]).unwrap();
    assert_eq!(v, DescendantField::central(4, minbcov::superpoly::int(1)));
}
