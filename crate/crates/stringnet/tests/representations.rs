use stringnet::fusion_data::{builtin_category, pentagon_residual, tuples, FusionCategory};
use stringnet::groupoid::{build_groupoid, Groupoid};
use stringnet::linalg;
use stringnet::representations::*;
use stringnet::Error;

fn groupoid(name: &str) -> Groupoid {
    build_groupoid(&builtin_category(name).unwrap()).unwrap()
}

/// Fusion ring of Rep(S3) with labels 1, sign, 2; no F-symbols.
fn rep_s3_ring() -> FusionCategory {
    let mut cat = FusionCategory::empty("rep_s3", vec!["1".into(), "s".into(), "2".into()], vec![1.0, 1.0, 2.0]);
    let fusion = [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 0), (1, 2, 2), (2, 2, 0), (2, 2, 1), (2, 2, 2)];
    for (a, b, c) in fusion {
        for [x, y, z] in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            cat.set_adm(x, y, z, true);
        }
    }
    cat
}

#[test]
fn module_dimensions() {
    let g = groupoid("fibonacci");
    assert_eq!(simple_module(&g, 0).unwrap().dim(), 2);
    assert_eq!(simple_module(&g, 1).unwrap().dim(), 3);
    let g = groupoid("vec_z2");
    assert_eq!(simple_module(&g, 0).unwrap().dim(), 2);
    assert_eq!(simple_module(&g, 1).unwrap().dim(), 2);
    assert!(simple_module(&g, 2).is_err());
}

#[test]
fn module_axiom() {
    for name in ["fibonacci", "vec_z2"] {
        let g = groupoid(name);
        for i in 0..g.cat.rank() {
            for x in 0..g.dim() {
                for y in 0..g.dim() {
                    let xy = g.multiply(&g.basis_element(x), &g.basis_element(y)).unwrap();
                    let l = rho_basis(&g, i, x) * rho_basis(&g, i, y);
                    let r = rho(&g, i, &xy.coeffs);
                    assert!(linalg::max_abs(&(l - r)) < 1e-12);
                }
            }
        }
    }
}

#[test]
fn semisimple_blocks() {
    let g = groupoid("fibonacci");
    assert_eq!(block_dimensions(&g.cat), vec![2, 3]);
    let rep = verify_semisimple_decomposition(&g, 1e-10);
    assert!(rep.passed(), "{}", rep.to_text());
    let g = groupoid("vec_z2");
    assert_eq!(block_dimensions(&g.cat), vec![2, 2]);
    assert!(verify_semisimple_decomposition(&g, 1e-10).passed());
}

#[test]
fn rep_s3_block_count() {
    let ring = rep_s3_ring();
    let blocks = block_dimensions(&ring);
    assert_eq!(blocks, vec![3, 3, 5]);
    assert_eq!(blocks.iter().map(|b| b * b).sum::<usize>(), 43);
}

#[test]
fn clebsch_gordan() {
    let g = groupoid("fibonacci");
    assert!(intertwining_residual(&g, 0, 1, 1).unwrap() < 1e-12);
    assert!(intertwining_residual(&g, 1, 1, 1).unwrap() < 1e-12);
    assert_eq!(tensor_product_dim(&g, 1, 1), 5);
    assert_eq!(tensor_product_dim(&g, 1, 1), simple_module(&g, 0).unwrap().dim() + simple_module(&g, 1).unwrap().dim());
    assert!(matches!(clebsch_gordan_embedding(&g, 0, 0, 1), Err(Error::Invalid(_))));
}

#[test]
fn tensor_dimensions_follow_fusion() {
    for name in ["fibonacci", "vec_z2"] {
        let g = groupoid(name);
        let r = g.cat.rank();
        for j in 0..r {
            for k in 0..r {
                let expect: usize = (0..r).filter(|&i| g.cat.adm(j, k, i)).map(|i| simple_module(&g, i).unwrap().dim()).sum();
                assert_eq!(tensor_product_dim(&g, j, k), expect, "{name} {j}⊗{k}");
            }
        }
    }
}

#[test]
fn rep_f_equals_conjugate_f() {
    for name in ["fibonacci", "vec_z2"] {
        let g = groupoid(name);
        let r = g.cat.rank();
        let mut rep_cat = g.cat.clone();
        for t in tuples(r, 6) {
            let [a, b, c, d, n, m] = [t[0], t[1], t[2], t[3], t[4], t[5]];
            if !g.cat.f_couplings_ok(a, b, c, d, n, m) {
                continue;
            }
            let (v, res) = rep_f_symbol(&g, a, b, c, d, n, m);
            assert!(res < 1e-9, "{name} {t:?} lsq residual {res}");
            assert!((v - g.cat.f(a, b, c, d, n, m).conj()).norm() < 1e-9, "{name} {t:?}: {v}");
            rep_cat.set_f(a, b, c, d, n, m, v);
        }
        assert!(pentagon_residual(&rep_cat) < 1e-9);
    }
}

#[test]
fn target_counital_module() {
    for name in ["fibonacci", "vec_z2"] {
        let g = groupoid(name);
        let rep = verify_target_counital_module(&g, 1e-10);
        assert!(rep.passed(), "{}", rep.to_text());
        assert_eq!(rep.get("dim H_t = dim V_1").unwrap().note.as_deref(), Some("2 vs 2"));
    }
}
