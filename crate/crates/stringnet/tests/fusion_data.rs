use stringnet::fusion_data::*;
use stringnet::{Error, C64};

fn phi() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

#[test]
fn fibonacci_labels_and_triples() {
    let cat = builtin_category("fibonacci").unwrap();
    assert_eq!(cat.rank(), 2);
    assert_eq!(cat.admissible_triples().len(), 5);
}

#[test]
fn fibonacci_f_tau() {
    let cat = builtin_category("fibonacci").unwrap();
    let f = cat.f(1, 1, 1, 1, 1, 1);
    assert!((f.re + 1.0 / phi()).abs() < 1e-15);
    assert!((f.re + 0.6180339887).abs() < 1e-10);
    assert_eq!(f.im, 0.0);
}

#[test]
fn fibonacci_total_dimension() {
    let cat = builtin_category("fibonacci").unwrap();
    assert!((cat.total_dim_sq() - (1.0 + phi() * phi())).abs() < 1e-14);
    assert!((cat.total_dim_sq() - 3.6180339887).abs() < 1e-10);
}

#[test]
fn vec_z2_f_all_one() {
    let cat = builtin_category("vec_z2").unwrap();
    let stored = cat.stored_f();
    assert!(!stored.is_empty());
    for (_, v) in stored {
        assert_eq!(v, C64::new(1.0, 0.0));
    }
}

#[test]
fn theta_symbol_values() {
    let fib = builtin_category("fibonacci").unwrap();
    assert!((fib.theta_symbol(1, 1, 1).unwrap() - phi().powf(1.5)).abs() < 1e-14);
    assert!((fib.theta_symbol(1, 1, 1).unwrap() - 2.0581710272).abs() < 1e-9);
    assert_eq!(fib.theta_symbol(0, 1, 0).unwrap(), 0.0);
    for name in ["fibonacci", "vec_z2"] {
        let cat = builtin_category(name).unwrap();
        assert_eq!(cat.theta_symbol(0, 0, 0).unwrap(), 1.0);
        for a in 0..cat.rank() {
            for b in 0..cat.rank() {
                for c in 0..cat.rank() {
                    let t = cat.theta_symbol(a, b, c).unwrap();
                    for p in [(b, a, c), (a, c, b), (c, b, a), (b, c, a), (c, a, b)] {
                        assert_eq!(t, cat.theta_symbol(p.0, p.1, p.2).unwrap());
                    }
                }
            }
        }
    }
    assert!(matches!(fib.theta_symbol(0, 0, 5), Err(Error::UnknownLabel(_))));
}

#[test]
fn g_symbol_values() {
    let fib = builtin_category("fibonacci").unwrap();
    let g = fib.g_symbol(1, 1, 1, 1, 1, 1).unwrap();
    assert!((g.re + phi().powf(-0.5)).abs() < 1e-14);
    // unit couplings
    for b in 0..2 {
        let g = fib.g_symbol(0, b, b, b, 0, 0).unwrap();
        assert!((g.re - 1.0).abs() < 1e-14, "b={b}: {g}");
    }
    let z2 = builtin_category("vec_z2").unwrap();
    for t in tuples(2, 6) {
        let g = z2.g(t[0], t[1], t[2], t[3], t[4], t[5]);
        assert!(g == C64::new(0.0, 0.0) || (g - C64::new(1.0, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn verify_builtins() {
    let fib = builtin_category("fibonacci").unwrap();
    let rep = verify_category(&fib, 1e-10);
    assert!(rep.passed(), "{}", rep.to_text());
    assert!(rep.checks.iter().filter(|c| c.gating).all(|c| c.max_residual < 1e-12));
    let z2 = builtin_category("vec_z2").unwrap();
    let rep = verify_category(&z2, 1e-10);
    assert!(rep.passed());
    assert!(rep.checks.iter().all(|c| c.max_residual == 0.0), "{}", rep.to_text());
}

#[test]
fn perturbed_pentagon_fails() {
    let mut cat = builtin_category("fibonacci").unwrap();
    let f = cat.f(1, 1, 1, 1, 1, 1);
    cat.set_f(1, 1, 1, 1, 1, 1, f + 0.01);
    let res = pentagon_residual(&cat);
    assert!(res > 1e-3, "{res}");
    let rep = verify_category(&cat, 1e-10);
    assert!(!rep.passed());
    assert!(!rep.get("F pentagon").unwrap().pass);
}

#[test]
fn json_round_trip() {
    for name in ["fibonacci", "vec_z2"] {
        let cat = builtin_category(name).unwrap();
        let back = load_category(&cat.to_json()).unwrap();
        assert_eq!(back.rank(), cat.rank());
        for t in tuples(cat.rank(), 6) {
            assert_eq!(back.f(t[0], t[1], t[2], t[3], t[4], t[5]), cat.f(t[0], t[1], t[2], t[3], t[4], t[5]));
        }
    }
}

#[test]
fn trivial_category() {
    let text = r#"{"labels":["1"],"qdim":[1.0],"admissible":[["1","1","1"]],
        "f_symbols":[{"a":"1","b":"1","c":"1","d":"1","n":"1","m":"1","re":1.0}]}"#;
    let cat = load_category(text).unwrap();
    assert_eq!(cat.rank(), 1);
    assert!(verify_category(&cat, 1e-10).passed());
}

#[test]
fn non_admissible_f_rejected() {
    let text = r#"{"labels":["1","t"],"qdim":[1.0,1.0],"admissible":[["1","1","1"],["1","t","t"],["t","1","t"],["t","t","1"]],
        "f_symbols":[{"a":"t","b":"t","c":"t","d":"t","n":"t","m":"t","re":1.0}]}"#;
    assert!(matches!(load_category(text), Err(Error::Consistency(_))));
}

#[test]
fn unknown_builtin() {
    assert!(matches!(builtin_category("ising"), Err(Error::UnknownName(_))));
}
