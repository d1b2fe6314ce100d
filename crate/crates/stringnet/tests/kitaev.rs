use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stringnet::fusion_data::builtin_category;
use stringnet::groupoid::{build_groupoid, Groupoid};
use stringnet::kitaev::*;
use stringnet::lattice::{builtin_lattice, SurfaceLattice};
use stringnet::levin_wen::admissible_labelings;
use stringnet::C64;

fn setup(c: &str, l: &str) -> (Groupoid, SurfaceLattice) {
    (build_groupoid(&builtin_category(c).unwrap()).unwrap(), builtin_lattice(l).unwrap())
}

fn rel(a: &TensorState, b: &TensorState) -> f64 {
    a.max_diff(b) / a.norm().max(b.norm()).max(1e-300)
}

#[test]
fn stabilizer_suites() {
    for (c, l) in [("fibonacci", "theta_sphere"), ("vec_z2", "theta_sphere"), ("vec_z2", "k4_torus")] {
        let (g, lat) = setup(c, l);
        let m = KitaevModel::new(&g, &lat).unwrap();
        let rep = verify_stabilizers(&m, 1e-9, 11).unwrap();
        assert!(rep.passed(), "{c} {l}\n{}", rep.to_text());
    }
}

#[test]
fn every_orientation_of_theta() {
    let (g, lat) = setup("fibonacci", "theta_sphere");
    for mask in 0..8usize {
        let mut l = lat.clone();
        for e in 0..3 {
            if mask >> e & 1 == 1 {
                l = l.with_edge_reversed(e);
            }
        }
        let m = KitaevModel::new(&g, &l).unwrap();
        let rep = verify_stabilizers(&m, 1e-9, 5).unwrap();
        assert!(rep.passed(), "orientation {mask:03b}\n{}", rep.to_text());
        assert_eq!(ground_space_dimension(&m, GsdMethod::ExactTrace, 0).unwrap().gsd, 1);
    }
}

#[test]
fn unit_and_counit_operators_idempotent() {
    let (g, lat) = setup("fibonacci", "theta_sphere");
    let m = KitaevModel::new(&g, &lat).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let psi = m.random_state(&mut rng);
    let a = m.vertex_operator(&g.unit(), &m.vertex_site(0)).unwrap();
    let b = m.plaquette_operator(&g.counit_dual(), &m.face_site(0)).unwrap();
    for op in [a, b] {
        let once = m.apply(&op, &psi);
        assert!(rel(&m.apply(&op, &once), &once) < 1e-12);
    }
}

#[test]
fn hamiltonian_spectrum_theta() {
    let (g, lat) = setup("fibonacci", "theta_sphere");
    let m = KitaevModel::new(&g, &lat).unwrap();
    assert_eq!(m.dim(), 2197);
    let ev = hamiltonian_spectrum(&m).unwrap();
    let min = ev.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!((min + 5.0).abs() < 1e-9);
    assert_eq!(ev.iter().filter(|&&x| (x + 5.0).abs() < 1e-6).count(), 1);
}

#[test]
fn ground_vector_energy() {
    let (g, lat) = setup("fibonacci", "theta_sphere");
    let m = KitaevModel::new(&g, &lat).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let psi0 = m.apply_projector(&m.random_state(&mut rng));
    let h = m.apply_hamiltonian(&psi0).unwrap();
    let mut want = psi0.clone();
    want.scale(C64::new(-5.0, 0.0));
    assert!(rel(&h, &want) < 1e-10);
}

#[test]
fn gsd_small_lattices() {
    for (c, l, want) in [("fibonacci", "theta_sphere", 1), ("vec_z2", "theta_sphere", 1), ("vec_z2", "k4_torus", 4)] {
        let (g, lat) = setup(c, l);
        let m = KitaevModel::new(&g, &lat).unwrap();
        let exact = ground_space_dimension(&m, GsdMethod::ExactTrace, 0).unwrap();
        assert_eq!(exact.gsd, want, "{c} {l}");
        assert!(exact.deviation < 1e-9);
        let rnd = ground_space_dimension(&m, GsdMethod::RandomizedRank, 3).unwrap();
        assert_eq!(rnd.gsd, want, "{c} {l}");
    }
}

#[test]
fn gsd_is_orientation_independent() {
    let (g, lat) = setup("vec_z2", "k4_torus");
    for e in [0, 3] {
        let l = lat.with_edge_reversed(e);
        let m = KitaevModel::new(&g, &l).unwrap();
        assert_eq!(ground_space_dimension(&m, GsdMethod::ExactTrace, 0).unwrap().gsd, 4);
    }
}

#[test]
fn l0_basis() {
    let (g, lat) = setup("fibonacci", "theta_sphere");
    let m = KitaevModel::new(&g, &lat).unwrap();
    let all_one = m.l0_basis_state(&[0, 0, 0]).unwrap();
    assert!(all_one.admissible);
    let psi = all_one.to_dense(m.dim());
    for v in 0..lat.num_vertices() {
        assert!(rel(&m.apply(&m.vertex_stabilizer(v), &psi), &psi) < 1e-11);
    }
    let labs = admissible_labelings(&g.cat, &lat);
    let states: Vec<TensorState> = labs.iter().map(|l| m.l0_basis_state(l).unwrap().to_dense(m.dim())).collect();
    assert_eq!(states.len(), 5);
    assert_eq!(m.l0_dimension().unwrap(), 5);
    for (i, a) in states.iter().enumerate() {
        assert!(a.norm() > 0.0);
        assert!((m.inner(a, a).re - 1.0).abs() < 1e-12);
        for b in &states[i + 1..] {
            assert!(m.chi_inner(a, b).norm() < 1e-10);
            assert!(m.inner(a, b).norm() < 1e-10);
        }
    }
    assert!(!m.l0_basis_state(&[0, 0, 1]).unwrap().admissible);
}

#[test]
fn site_algebra() {
    let (g, _) = setup("vec_z2", "theta_sphere");
    let rep = verify_site_algebra(&g, 1e-10);
    assert!(rep.passed(), "{}", rep.to_text());
    assert!(rep.checks.iter().all(|c| c.max_residual < 1e-13));
    let (g, _) = setup("fibonacci", "theta_sphere");
    let rep = verify_site_algebra(&g, 1e-10);
    assert!(rep.passed(), "{}", rep.to_text());
}

#[test]
fn sabotaged_site_algebra_fails() {
    let (mut g, _) = setup("fibonacci", "theta_sphere");
    g.sabotage_identity_antipode();
    let rep = verify_site_algebra(&g, 1e-10);
    assert!(!rep.get("A_h B_α exchange relation").unwrap().pass);
}

#[test]
fn dense_limits() {
    let (g, lat) = setup("fibonacci", "honeycomb_torus(2,2)");
    let m = KitaevModel::new(&g, &lat).unwrap();
    assert!(m.check_dense().is_err());
    assert!(ground_space_dimension(&m, GsdMethod::RandomizedRank, 0).is_err());
}

#[test]
#[ignore = "about 2.5 minutes per seed on one core"]
fn fibonacci_torus_randomized() {
    let (g, lat) = setup("fibonacci", "k4_torus");
    let m = KitaevModel::new(&g, &lat).unwrap();
    assert_eq!(ground_space_dimension(&m, GsdMethod::RandomizedRank, 7).unwrap().gsd, 4);
}
