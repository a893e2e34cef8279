use num_complex::Complex64;

use oscquad::oracle::{brute_force, kummer_moment, log_moment, self_convergence_ref};
use oscquad::{composite_fcc, CompositeParams, Endpoint, SingularityClass};

fn x_pow(beta: f64) -> impl Fn(f64) -> Complex64 + Sync {
    move |x: f64| Complex64::new(x.powf(beta), 0.0)
}

#[test]
fn kummer_matches_brute_force() {
    for beta in [-0.5, -0.25, 0.25, 0.5, 0.75] {
        for k in [0.3, 1.9, 2.1, 40.0, 300.0] {
            let closed = kummer_moment(beta, k).unwrap().value;
            let brute = brute_force(&x_pow(beta), 0.0, 1.0, k, 1e-13, &[Endpoint::Left]).unwrap().value;
            assert!((closed - brute).norm() < 1e-11, "β={beta} k={k}: {closed} vs {brute}");
        }
    }
}

#[test]
fn log_moment_matches_brute_force() {
    let f = |x: f64| Complex64::new(x.ln(), 0.0);
    for k in [0.5, 1.5, 2.5, 30.0, 500.0] {
        let closed = log_moment(k).unwrap().value;
        let brute = brute_force(&f, 0.0, 1.0, k, 1e-13, &[Endpoint::Left]).unwrap().value;
        assert!((closed - brute).norm() < 1e-11, "k={k}: {closed} vs {brute}");
    }
}

#[test]
fn negative_wavenumber_conjugates() {
    let plus = kummer_moment(0.5, 12.0).unwrap().value;
    let minus = kummer_moment(0.5, -12.0).unwrap().value;
    assert!((plus.conj() - minus).norm() < 1e-15);
}

#[test]
fn composite_rule_converges_to_closed_forms() {
    for (sing, exact) in [
        (SingularityClass::Algebraic(-0.5), kummer_moment(-0.5, 1e3).unwrap().value),
        (SingularityClass::Algebraic(0.5), kummer_moment(0.5, 1e3).unwrap().value),
        (SingularityClass::Logarithmic, log_moment(1e3).unwrap().value),
    ] {
        let f = |x: f64| match sing {
            SingularityClass::Algebraic(b) => Complex64::new(x.powf(b), 0.0),
            _ => Complex64::new(x.ln(), 0.0),
        };
        let r = composite_fcc(&f, sing, 1e3, &CompositeParams::auto(8, 128, 0.0)).unwrap();
        assert!((r.value - exact).norm() < 1e-13 * (1.0 + exact.norm()), "{sing:?}: {} vs {exact}", r.value);
    }
}

#[test]
fn self_convergence_uses_method_history() {
    let schedule = [8, 16, 32, 64, 128];
    let k = 1e3;
    let f = x_pow(-0.5);
    let r = self_convergence_ref(&schedule, |m| {
        composite_fcc(&f, SingularityClass::Algebraic(-0.5), k, &CompositeParams::auto(4, m, 0.0)).map(|r| r.value)
    })
    .unwrap();
    let exact = kummer_moment(-0.5, k).unwrap().value;
    assert!((r.value - exact).norm() <= 10.0 * r.claimed_abs_error);

    // uniform mesh on x^{-1/2}: differences fall only by √2
    let slow = self_convergence_ref(&schedule, |m| {
        composite_fcc(&f, SingularityClass::Algebraic(-0.5), k, &CompositeParams::new(8, m, 1.0)).map(|r| r.value)
    });
    assert!(slow.is_err());
}
