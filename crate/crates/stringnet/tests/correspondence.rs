use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stringnet::correspondence::*;
use stringnet::fusion_data::builtin_category;
use stringnet::groupoid::build_groupoid;
use stringnet::kitaev::KitaevModel;
use stringnet::lattice::builtin_lattice;
use stringnet::levin_wen::{encode, LevinWenModel};
use stringnet::{Error, C64};

macro_rules! models {
    ($c:expr, $l:expr, $k:ident, $lw:ident) => {
        let cat = builtin_category($c).unwrap();
        let g = build_groupoid(&cat).unwrap();
        let lat = builtin_lattice($l).unwrap();
        let $k = KitaevModel::new(&g, &lat).unwrap();
        let $lw = LevinWenModel::new(&cat, &lat).unwrap();
    };
}

#[test]
fn basis_states_map_to_deltas() {
    models!("fibonacci", "theta_sphere", k, lw);
    let basis = L0Basis::new(&k, &lw).unwrap();
    for (l, s) in basis.labelings.iter().zip(&basis.states) {
        let img = theta_map(&basis, &lw, s, 1e-9).unwrap();
        for (idx, a) in img.amps.iter().enumerate() {
            let want = if idx == encode(l, 2) { 1.0 } else { 0.0 };
            assert!((a - C64::new(want, 0.0)).norm() < 1e-12);
        }
    }
}

#[test]
fn linear_and_invertible() {
    models!("fibonacci", "theta_sphere", k, lw);
    let basis = L0Basis::new(&k, &lw).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let coeffs: Vec<C64> = (0..basis.len()).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let psi = basis.combine(&coeffs);
    let img = theta_map(&basis, &lw, &psi, 1e-9).unwrap();
    let mut lin = 0f64;
    for (l, c) in basis.labelings.iter().zip(&coeffs) {
        lin = lin.max((img.amps[encode(l, 2)] - c).norm());
    }
    assert!(lin < 1e-12);
    let back = theta_inverse(&basis, &lw, &img);
    assert!(back.max_diff(&psi) / psi.norm() < 1e-10);
}

#[test]
fn rejects_states_outside_l0() {
    models!("fibonacci", "theta_sphere", k, lw);
    let basis = L0Basis::new(&k, &lw).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let psi = k.random_state(&mut rng);
    assert!(matches!(theta_map(&basis, &lw, &psi, 1e-9), Err(Error::Invalid(_))));
}

#[test]
fn intertwining_theta() {
    for c in ["fibonacci", "vec_z2"] {
        models!(c, "theta_sphere", k, lw);
        let rep = verify_intertwining(&k, &lw, 1e-9, 1).unwrap();
        assert!(rep.pass, "{rep:?}");
        assert!(rep.residual.unwrap() < 1e-9);
        assert!(rep.flux_residual.unwrap() < 1e-9);
        assert_eq!(rep.gsd_k, Some(1));
        assert_eq!(rep.gsd_lw, 1);
    }
}

#[test]
fn intertwining_z2_torus() {
    models!("vec_z2", "k4_torus", k, lw);
    let rep = verify_intertwining(&k, &lw, 1e-10, 1).unwrap();
    assert!(rep.pass, "{rep:?}");
    assert_eq!((rep.dim_k0, rep.dim_lw0), (8, 8));
    assert_eq!((rep.gsd_k, rep.gsd_lw), (Some(4), 4));
}

#[test]
fn restricted_mode_on_large_lattices() {
    models!("fibonacci", "honeycomb_torus(2,2)", k, lw);
    assert!(L0Basis::new(&k, &lw).is_err());
    let rep = verify_intertwining(&k, &lw, 1e-9, 1).unwrap();
    assert!(rep.residual.is_none() && rep.gsd_k.is_none());
    assert_eq!(rep.dim_k0, rep.dim_lw0);
    assert_eq!(rep.gsd_lw, 4);
    assert!(rep.pass);
}

#[test]
fn l0_dimensions_agree() {
    for c in ["fibonacci", "vec_z2"] {
        for l in ["theta_sphere", "k4_torus", "honeycomb_torus(2,2)"] {
            models!(c, l, k, lw);
            assert_eq!(k.l0_dimension().unwrap(), lw.labelings().len(), "{c} {l}");
        }
    }
}

#[test]
fn report_serializes() {
    models!("vec_z2", "theta_sphere", k, lw);
    let rep = verify_intertwining(&k, &lw, 1e-9, 1).unwrap();
    let json = serde_json::to_value(&rep).unwrap();
    assert_eq!(json["pass"], true);
    assert_eq!(json["gsd_k_method"], "exact-trace");
}
