use stringnet::fusion_data::{builtin_category, golden_ratio};
use stringnet::lattice::builtin_lattice;
use stringnet::levin_wen::*;
use stringnet::linalg::{self, CMat};

#[test]
fn vertex_projector() {
    let cat = builtin_category("fibonacci").unwrap();
    let lat = builtin_lattice("theta_sphere").unwrap();
    let lw = LevinWenModel::new(&cat, &lat).unwrap();
    assert_eq!(lw.vertex_projector(0, &[1, 1, 1]), 1.0);
    assert_eq!(lw.vertex_projector(0, &[0, 0, 1]), 0.0);
    let psi = lw.basis_state(&[1, 1, 0]);
    let once = lw.apply_vertex(0, &psi);
    let twice = lw.apply_vertex(0, &once);
    assert_eq!(once.amps, twice.amps);
}

#[test]
fn admissible_counts() {
    let fib = builtin_category("fibonacci").unwrap();
    let z2 = builtin_category("vec_z2").unwrap();
    let theta = builtin_lattice("theta_sphere").unwrap();
    let k4 = builtin_lattice("k4_torus").unwrap();
    let hc = builtin_lattice("honeycomb_torus(2,2)").unwrap();
    // brute force over all labelings
    for (cat, lat) in [(&fib, &theta), (&fib, &k4), (&z2, &k4), (&fib, &hc)] {
        let r = cat.rank();
        let ne = lat.num_edges();
        let count = (0..r.pow(ne as u32))
            .filter(|&idx| {
                let l = decode(idx, r, ne);
                (0..lat.num_vertices()).all(|v| {
                    let [a, b, c] = lat.vertex_half_edges(v).map(|h| l[lat.edge_of(h)]);
                    cat.adm(a, b, c)
                })
            })
            .count();
        assert_eq!(admissible_labelings(cat, lat).len(), count);
    }
    assert_eq!(admissible_labelings(&fib, &theta).len(), 5);
}

#[test]
fn plaquette_checks() {
    for (c, l) in [("fibonacci", "theta_sphere"), ("fibonacci", "k4_torus"), ("vec_z2", "k4_torus"), ("fibonacci", "honeycomb_torus(2,2)")] {
        let cat = builtin_category(c).unwrap();
        let lat = builtin_lattice(l).unwrap();
        let lw = LevinWenModel::new(&cat, &lat).unwrap();
        let rep = verify_plaquettes(&lw, 1e-10);
        assert!(rep.passed(), "{c} {l}\n{}", rep.to_text());
    }
}

#[test]
fn hexagon_all_tau_coefficient() {
    let cat = builtin_category("fibonacci").unwrap();
    let lat = builtin_lattice("honeycomb_torus(2,2)").unwrap();
    let lw = LevinWenModel::new(&cat, &lat).unwrap();
    let all = vec![1; lat.num_edges()];
    let phi = golden_ratio();
    for path in [PlaquettePath::GSymbol, PlaquettePath::FSymbol] {
        let col = lw.plaquette_column(0, 1, &all, path);
        let c = col.iter().find(|(l, _)| l == &all).map(|(_, c)| *c).unwrap();
        // six sides √(1/φ) and six corners G^{τττ}_{τττ} = −φ^{-1/2}
        assert!((c.re - phi.powi(-6)).abs() < 1e-12, "{path:?}: {c}");
    }
}

#[test]
fn apply_matches_matrix() {
    let cat = builtin_category("fibonacci").unwrap();
    let lat = builtin_lattice("k4_torus").unwrap();
    let lw = LevinWenModel::new(&cat, &lat).unwrap();
    let r = cat.rank();
    for f in 0..lat.num_faces() {
        let m = lw.plaquette_matrix(f, Flux::Full, PlaquettePath::GSymbol);
        for (j, l) in lw.labelings().iter().enumerate() {
            let out = lw.apply_plaquette(f, Flux::Full, &lw.basis_state(l));
            for (i, li) in lw.labelings().iter().enumerate() {
                assert!((out.amps[encode(li, r)] - m[(i, j)]).norm() < 1e-14);
            }
        }
    }
}

#[test]
fn flux_sum_idempotent() {
    let cat = builtin_category("fibonacci").unwrap();
    let lat = builtin_lattice("theta_sphere").unwrap();
    let lw = LevinWenModel::new(&cat, &lat).unwrap();
    let dd = cat.total_dim_sq();
    for f in 0..lat.num_faces() {
        let n = lw.labelings().len();
        let mut b = CMat::zeros(n, n);
        for mu in 0..cat.rank() {
            b += lw.plaquette_matrix(f, Flux::Label(mu), PlaquettePath::FSymbol) * linalg::one().scale(cat.qdim(mu) / dd);
        }
        assert!(linalg::max_abs(&(&b * &b - &b)) < 1e-12);
    }
}

#[test]
fn ground_space_dimensions() {
    let cases = [
        ("fibonacci", "theta_sphere", 1),
        ("vec_z2", "theta_sphere", 1),
        ("fibonacci", "k4_torus", 4),
        ("vec_z2", "k4_torus", 4),
        ("vec_z2", "honeycomb_torus(2,2)", 4),
        ("fibonacci", "honeycomb_torus(2,2)", 4),
    ];
    for (c, l, want) in cases {
        let cat = builtin_category(c).unwrap();
        let lat = builtin_lattice(l).unwrap();
        let g = lw_ground_space_dimension(&LevinWenModel::new(&cat, &lat).unwrap()).unwrap();
        assert_eq!(g.gsd, want, "{c} {l}");
        assert!((g.trace - want as f64).abs() < 1e-9);
    }
}
