use minbcov::campaign::{run, CampaignConfig, Suite};
use minbcov::contraction::contraction_k;
use minbcov::pvcalc::{divergence, schouten, vee_omega, vee_omega_inv};
use minbcov::sho::{
    ext_bracket_d3, hamiltonian_vf, invert_hamiltonian, kappa, lie_sign, random_sho_generator, super_divergence,
    vf_bracket, ExtElement,
};
use minbcov::sl2::{embed, symplectic_defect, Sl2Element};
use minbcov::superpoly::{random_poly_seeded, sign};
use minbcov::SuperPoly;
use proptest::prelude::*;
use rand::SeedableRng;

/// (d, ξ-degree, seed) for a ξ-homogeneous sample.
fn homog(max_d: usize) -> impl Strategy<Value = (usize, usize, u64)> {
    (1..=max_d).prop_flat_map(|d| (Just(d), 0..=d, any::<u64>()))
}

fn poly(d: usize, j: usize, seed: u64, deg: u32) -> SuperPoly {
    random_poly_seeded(d, deg.max(j as u32), Some(j), seed)
}

fn odd(p: &SuperPoly) -> bool {
    p.xi_degree().unwrap_or(0) % 2 == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_roundtrip((d, j, s) in homog(4)) {
        let p = poly(d, j, s, 4);
        prop_assert_eq!(SuperPoly::parse(d, &p.to_text()).unwrap(), p);
    }

    #[test]
    fn delta_squares_to_zero((d, j, s) in homog(4)) {
        prop_assert!(divergence(&divergence(&poly(d, j, s, 5))).is_zero());
    }

    #[test]
    fn volume_form_roundtrip((d, j, s) in homog(4)) {
        let p = poly(d, j, s, 4);
        prop_assert_eq!(vee_omega_inv(&vee_omega(&p)), p);
    }

    #[test]
    fn schouten_shifted_antisymmetry((d, j, s) in homog(3), k in 0usize..=3, t in any::<u64>()) {
        let a = poly(d, j, s, 4);
        let b = poly(d, k.min(d), t, 4);
        let eps = sign(!odd(&a) && !odd(&b));
        prop_assert_eq!(schouten(&a, &b).unwrap(), schouten(&b, &a).unwrap().scale(&-eps));
    }

    #[test]
    fn schouten_shifted_jacobi((d, j, s) in homog(3), k in 0usize..=3, l in 0usize..=3, t in any::<u64>(), u in any::<u64>()) {
        let a = poly(d, j, s, 3);
        let b = poly(d, k.min(d), t, 3);
        let c = poly(d, l.min(d), u, 3);
        let lhs = schouten(&a, &schouten(&b, &c).unwrap()).unwrap();
        let eps = sign(!odd(&a) && !odd(&b));
        let rhs = schouten(&schouten(&a, &b).unwrap(), &c).unwrap()
            .add(&schouten(&b, &schouten(&a, &c).unwrap()).unwrap().scale(&eps)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_is_a_homotopy((d, j, s) in homog(4)) {
        prop_assume!(j < d);
        let mu = poly(d, j, s, 5);
        let back = divergence(&contraction_k(&mu)).add(&contraction_k(&divergence(&mu))).unwrap();
        prop_assert_eq!(back, mu);
    }

    #[test]
    fn divergence_of_hamiltonian_fields((d, j, s) in homog(4)) {
        let f = poly(d, j, s, 4);
        prop_assert_eq!(super_divergence(&hamiltonian_vf(&f)), divergence(&f).scale(&kappa(odd(&f))));
    }

    #[test]
    fn hamiltonian_map_is_lie_up_to_sign((d, j, s) in homog(3), k in 0usize..=3, t in any::<u64>()) {
        let f = poly(d, j, s, 3);
        let g = poly(d, k.min(d), t, 3);
        let lhs = vf_bracket(&hamiltonian_vf(&f), &hamiltonian_vf(&g)).unwrap();
        let rhs = hamiltonian_vf(&schouten(&f, &g).unwrap()).scale(&lie_sign(odd(&f), odd(&g)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hamiltonian_inverts_up_to_constants((d, j, s) in homog(4)) {
        let f = poly(d, j, s, 4);
        let g = invert_hamiltonian(&hamiltonian_vf(&f)).unwrap();
        prop_assert_eq!(g, f.filter(|m| !m.is_one()));
    }

    #[test]
    fn centre_is_central(s in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s);
        let g = random_sho_generator(&mut rng, 3, 4);
        let a = ExtElement::from_generator(&g).unwrap();
        prop_assert!(ext_bracket_d3(&ExtElement::e1(), &a).unwrap().is_zero());
        prop_assert!(ext_bracket_d3(&a, &ExtElement::e2()).unwrap().is_zero());
    }

    #[test]
    fn field_action_preserves_the_pairing(s in any::<u64>(), t in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s);
        let mut rng2 = rand_chacha::ChaCha8Rng::seed_from_u64(t);
        let a = embed(&ExtElement::from_generator(&random_sho_generator(&mut rng, 3, 3)).unwrap()).unwrap();
        let b = embed(&ExtElement::from_generator(&random_sho_generator(&mut rng2, 3, 3)).unwrap()).unwrap();
        for x in [Sl2Element::e(), Sl2Element::h(), Sl2Element::f()] {
            prop_assert!(symplectic_defect(&x, &a, &b).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn campaigns_are_deterministic(seed in any::<u64>()) {
        let cfg = CampaignConfig { trials: 10, seed, suites: vec![Suite::Algebra, Suite::Jacobi, Suite::Sho], ..Default::default() };
        prop_assert_eq!(run(&cfg).unwrap().to_jsonl(), run(&cfg).unwrap().to_jsonl());
    }
}
