use fuglede_core::counterexample::{construct_a, construct_e, verify_counterexample};
use fuglede_core::residue::{is_prime, nonsquares};
use fuglede_core::spectral::is_spectrum;

#[test]
fn every_nonsquare_for_every_odd_prime_up_to_101() {
    for p in (3..=101).filter(|&p| is_prime(p)) {
        for n in nonsquares(p).unwrap() {
            let report = verify_counterexample(p, Some(n)).unwrap();
            assert!(report.pass, "p={p} n={n}: {:?}", report.failing_steps());
        }
    }
}

#[test]
fn minus_one_when_p_is_3_mod_4() {
    for p in (3..=101).filter(|&p| is_prime(p) && p % 4 == 3) {
        let report = verify_counterexample(p, Some(p - 1)).unwrap();
        assert!(report.pass, "p={p}");
    }
}

#[test]
fn spectral_for_every_nonsquare_small_primes() {
    for p in [3, 5, 7, 11, 13] {
        for n in nonsquares(p).unwrap() {
            let e = construct_e(p, n).unwrap();
            let a = construct_a(p, n).unwrap();
            assert!(is_spectrum(&a, &e).unwrap(), "p={p} n={n}");
            assert!(is_spectrum(&e, &a).unwrap(), "dual p={p} n={n}");
        }
    }
}
