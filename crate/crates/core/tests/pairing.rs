use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sandpile_core::dlp::{
    banana_pairing, banana_potential, brute_force_default, denominator_divides, monodromy_pairing,
    random_instance, shokrieh_solve, BananaHypotheses,
};
use sandpile_core::exactmath::pseudoinverse;
use sandpile_core::graphs::{banana_subdivided, laplacian, square_cycle, wheel};
use sandpile_core::rational::fractional_part;
use sandpile_core::{Divisor, Graph, Sandpile};

fn random_degree_zero(n: usize, rng: &mut ChaCha8Rng) -> Divisor {
    let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-30..=30)).collect();
    let total: i64 = v.iter().sum();
    let i = rng.gen_range(0..n);
    v[i] -= total;
    Divisor::from_i64(&v)
}

fn frac_sum(a: &BigRational, b: &BigRational) -> BigRational {
    fractional_part(&(a + b))
}

fn pairing_graphs() -> Vec<Graph> {
    vec![
        square_cycle(7).unwrap(),
        square_cycle(12).unwrap(),
        wheel(7).unwrap(),
        wheel(10).unwrap(),
        banana_subdivided(&[3, 7, 10]).unwrap(),
    ]
}

#[test]
fn symmetry_bilinearity_and_shift_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for g in pairing_graphs() {
        let n = g.vertex_count();
        let l = laplacian(&g);
        let p = pseudoinverse(&l).unwrap();
        let order = sandpile_core::graphs::tree_count(&g);
        for _ in 0..200 {
            let a = random_degree_zero(n, &mut rng);
            let b = random_degree_zero(n, &mut rng);
            let c = random_degree_zero(n, &mut rng);
            let ab = monodromy_pairing(&p, &a, &b).unwrap();
            assert_eq!(ab, monodromy_pairing(&p, &b, &a).unwrap());
            assert!(denominator_divides(&ab, &order));

            let lhs = monodromy_pairing(&p, &a.add(&b).unwrap(), &c).unwrap();
            let ac = monodromy_pairing(&p, &a, &c).unwrap();
            let bc = monodromy_pairing(&p, &b, &c).unwrap();
            assert_eq!(lhs.value(), &frac_sum(ac.value(), bc.value()));

            let z: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect();
            let shifted = a.add(&Divisor::new(l.mul_vec(&z).unwrap())).unwrap();
            assert_eq!(monodromy_pairing(&p, &shifted, &c).unwrap(), ac);
            let principal = Divisor::new(l.mul_vec(&z).unwrap());
            assert!(monodromy_pairing(&p, &principal, &c).unwrap().value().is_zero());
        }
    }
}

fn banana_parameters() -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for a in 1..=9u64 {
        for b in a..=9 {
            if BananaHypotheses::check(&[a, b]).is_ok() {
                out.push(vec![a, b]);
            }
            for c in b..=9 {
                if BananaHypotheses::check(&[a, b, c]).is_ok() {
                    out.push(vec![a, b, c]);
                }
            }
        }
    }
    out
}

#[test]
fn banana_potential_agrees_with_pseudoinverse() {
    let params = banana_parameters();
    assert!(params.len() > 20);
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..50 {
        let s = &params[rng.gen_range(0..params.len())];
        let g = banana_subdivided(s).unwrap();
        let n = g.vertex_count();
        let p = pseudoinverse(&laplacian(&g)).unwrap();
        let f = banana_potential(s).unwrap();
        let base = Divisor::point_difference(n, 0, 1);
        let d = random_degree_zero(n, &mut rng);
        assert_eq!(
            banana_pairing(s, &f, &d).unwrap(),
            monodromy_pairing(&p, &base, &d).unwrap(),
            "s = {s:?}"
        );
    }
}

#[test]
fn banana_base_point_generates() {
    for s in banana_parameters() {
        let sp = Sandpile::with_default_sink(banana_subdivided(&s).unwrap());
        let gd = sp.group_structure();
        assert!(gd.invariant_factors.len() <= 1, "{s:?} not cyclic");
        let p = pseudoinverse(&laplacian(sp.graph())).unwrap();
        let base = Divisor::point_difference(sp.vertex_count(), 0, 1);
        // <D, D> has full denominator exactly when D generates
        let self_pair = monodromy_pairing(&p, &base, &base).unwrap();
        assert_eq!(self_pair.denom(), &sp.order(), "{s:?}");
    }
}

#[test]
fn pairing_solver_matches_brute_force_on_small_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let graphs = [square_cycle(5).unwrap(), wheel(4).unwrap(), wheel(6).unwrap(), banana_subdivided(&[2, 3, 5]).unwrap()];
    for g in graphs {
        let sp = Sandpile::with_default_sink(g);
        assert!(sp.order().to_u64().unwrap() <= 5000);
        for _ in 0..10 {
            let (inst, _) = random_instance(&sp, &mut rng).unwrap();
            let sol = shokrieh_solve(&inst).unwrap();
            assert!(sol.verified);
            let brute = brute_force_default(&inst).unwrap().unwrap();
            let diff = sol.reported_x() - BigInt::from(brute);
            assert!((diff % sol.residue_class.modulus()).is_zero());
        }
    }
}
