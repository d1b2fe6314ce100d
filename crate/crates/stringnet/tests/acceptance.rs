//! Acceptance criteria 1-10, one line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use stringnet::correspondence::verify_intertwining;
use stringnet::fusion_data::{builtin_category, tuples, verify_category, FusionCategory};
use stringnet::groupoid::{build_groupoid, verify_canonical_elements, verify_groupoid_axioms, verify_tlj, CoproductMode, Groupoid};
use stringnet::kitaev::{ground_space_dimension, verify_site_algebra, verify_stabilizers, GsdMethod, KitaevModel};
use stringnet::lattice::builtin_lattice;
use stringnet::levin_wen::{lw_ground_space_dimension, verify_plaquettes, Flux, LevinWenModel, PlaquettePath};
use stringnet::linalg;
use stringnet::report::VerificationReport;
use stringnet::representations::*;

const CATS: [&str; 2] = ["fibonacci", "vec_z2"];
const LATS: [&str; 3] = ["theta_sphere", "k4_torus", "honeycomb_torus(2,2)"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn groupoid(name: &str) -> Groupoid {
    build_groupoid(&builtin_category(name).unwrap()).unwrap()
}

fn worst(rep: &VerificationReport) -> f64 {
    rep.checks.iter().filter(|c| c.gating).map(|c| c.max_residual).fold(0.0, f64::max)
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let cat = builtin_category("fibonacci").unwrap();
    let rep = verify_category(&cat, 1e-10);
    let secs = t.elapsed().as_secs_f64();
    let names = ["F pentagon", "F unitarity", "G pentagon"];
    let res = names.iter().map(|n| rep.get(n).map_or(f64::INFINITY, |c| c.max_residual)).fold(0.0, f64::max);
    ok(rep.passed() && res < 1e-10 && secs < 1.0, format!("pentagon/unitarity/G-pentagon max {res:.2e}, {secs:.3}s"))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let g = groupoid("fibonacci");
    let ax = verify_groupoid_axioms(&g, 1e-10);
    let blocks = block_dimensions(&g.cat);
    let ss = verify_semisimple_decomposition(&g, 1e-10);
    let secs = t.elapsed().as_secs_f64();
    let pass = g.dim() == 13 && ax.passed() && blocks == vec![2, 3] && ss.passed() && secs < 5.0;
    ok(pass, format!("dim {}, axioms max {:.2e}, blocks {blocks:?}, {secs:.3}s", g.dim(), worst(&ax)))
}

fn criterion_3() -> Outcome {
    let rep = verify_tlj(&groupoid("fibonacci"), 1e-10).unwrap();
    ok(rep.passed(), format!("{} relations, max {:.2e}", rep.checks.len(), worst(&rep)))
}

fn criterion_4() -> Outcome {
    let g = groupoid("fibonacci");
    let rep = verify_canonical_elements(&g, 1e-10);
    let trace_like = rep
        .checks
        .iter()
        .filter(|c| c.gating && (c.name.contains("(xy) = ") || c.name.contains("(S(x)) = ")))
        .map(|c| c.max_residual)
        .fold(0.0, f64::max);
    let d2 = rep.get("Δ²(Λ) matches 6j display").map_or(f64::INFINITY, |c| c.max_residual);
    ok(rep.passed() && trace_like < 1e-12 && d2 < 1e-10, format!("Δ²(Λ) {d2:.2e}, trace/S-invariance {trace_like:.2e}"))
}

fn criterion_5() -> Outcome {
    let g = groupoid("fibonacci");
    let cg = intertwining_residual(&g, 0, 1, 1).unwrap().max(intertwining_residual(&g, 1, 1, 1).unwrap());
    let split = tensor_product_dim(&g, 1, 1) == simple_module(&g, 0).unwrap().dim() + simple_module(&g, 1).unwrap().dim();
    let ht = verify_target_counital_module(&g, 1e-10);
    let mut rep_f = 0f64;
    for t in tuples(g.cat.rank(), 6) {
        let [a, b, c, d, n, m] = [t[0], t[1], t[2], t[3], t[4], t[5]];
        if g.cat.f_couplings_ok(a, b, c, d, n, m) {
            let (v, res) = rep_f_symbol(&g, a, b, c, d, n, m);
            rep_f = rep_f.max((v - g.cat.f(a, b, c, d, n, m).conj()).norm()).max(res);
        }
    }
    ok(
        cg < 1e-10 && split && ht.passed() && rep_f < 1e-9,
        format!("CG {cg:.2e}, τ⊗τ = 1⊕τ {split}, dim H_t = dim V_1 {}, rep F {rep_f:.2e}", ht.passed()),
    )
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let mut pass = true;
    let (mut stab, mut indep) = (0f64, 0f64);
    for (c, l) in [("fibonacci", "theta_sphere"), ("vec_z2", "theta_sphere"), ("vec_z2", "k4_torus")] {
        let g = groupoid(c);
        let lat = builtin_lattice(l).unwrap();
        let m = KitaevModel::new(&g, &lat).unwrap();
        let rep = verify_stabilizers(&m, 1e-9, 6).unwrap();
        pass &= rep.passed();
        for ch in rep.checks.iter().filter(|c| c.gating) {
            if ch.name.contains("independent") {
                indep = indep.max(ch.max_residual);
            } else {
                stab = stab.max(ch.max_residual);
            }
        }
    }
    let mut site = 0f64;
    for c in CATS {
        let rep = verify_site_algebra(&groupoid(c), 1e-10);
        pass &= rep.passed();
        site = site.max(worst(&rep));
    }
    let secs = t.elapsed().as_secs_f64();
    ok(
        pass && indep < 1e-10 && secs < 120.0,
        format!("stabilizers {stab:.2e}, independence {indep:.2e}, site algebra {site:.2e}, {secs:.1}s"),
    )
}

fn criterion_7() -> Outcome {
    let mut pass = true;
    let mut found = Vec::new();
    for (c, l, want) in [("fibonacci", "theta_sphere", 1), ("vec_z2", "theta_sphere", 1), ("vec_z2", "k4_torus", 4)] {
        let cat = builtin_category(c).unwrap();
        let g = build_groupoid(&cat).unwrap();
        let lat = builtin_lattice(l).unwrap();
        let k = ground_space_dimension(&KitaevModel::new(&g, &lat).unwrap(), GsdMethod::ExactTrace, 0).unwrap().gsd;
        let lw = lw_ground_space_dimension(&LevinWenModel::new(&cat, &lat).unwrap()).unwrap().gsd;
        pass &= k == want && lw == want;
        found.push(format!("{c}/{l} K{k} LW{lw}"));
    }
    let cat = builtin_category("fibonacci").unwrap();
    let g = build_groupoid(&cat).unwrap();
    let lat = builtin_lattice("k4_torus").unwrap();
    let lw = lw_ground_space_dimension(&LevinWenModel::new(&cat, &lat).unwrap()).unwrap().gsd;
    let t = Instant::now();
    let m = KitaevModel::new(&g, &lat).unwrap();
    let ks: Vec<usize> = [1u64, 2, 3]
        .iter()
        .map(|&s| ground_space_dimension(&m, GsdMethod::RandomizedRank, s).map_or(0, |r| r.gsd))
        .collect();
    let secs = t.elapsed().as_secs_f64();
    pass &= lw == 4 && ks.iter().all(|&k| k == 4) && secs < 600.0;
    found.push(format!("fibonacci/k4_torus K{ks:?} LW{lw} ({secs:.0}s)"));
    ok(pass, found.join(", "))
}

fn criterion_8() -> Outcome {
    let mut pass = true;
    let (mut res, mut flux) = (0f64, 0f64);
    for (c, l) in [("fibonacci", "theta_sphere"), ("vec_z2", "theta_sphere"), ("vec_z2", "k4_torus")] {
        let cat = builtin_category(c).unwrap();
        let g = build_groupoid(&cat).unwrap();
        let lat = builtin_lattice(l).unwrap();
        let rep = verify_intertwining(&KitaevModel::new(&g, &lat).unwrap(), &LevinWenModel::new(&cat, &lat).unwrap(), 1e-9, 8)
            .unwrap();
        pass &= rep.pass;
        res = res.max(rep.residual.unwrap_or(f64::INFINITY));
        flux = flux.max(rep.flux_residual.unwrap_or(f64::INFINITY));
    }
    let mut dims = 0;
    for c in CATS {
        let cat = builtin_category(c).unwrap();
        let g = build_groupoid(&cat).unwrap();
        for l in LATS {
            let lat = builtin_lattice(l).unwrap();
            let k0 = KitaevModel::new(&g, &lat).unwrap().l0_dimension().unwrap();
            pass &= k0 == LevinWenModel::new(&cat, &lat).unwrap().labelings().len();
            dims += 1;
        }
    }
    ok(pass && res < 1e-9 && flux < 1e-9, format!("intertwining {res:.2e}, flux matrices {flux:.2e}, l0 dims equal on {dims} pairs"))
}

fn criterion_9() -> Outcome {
    let mut co = 0f64;
    for c in CATS {
        let g = groupoid(c);
        for k in 0..g.dim() {
            let x = g.basis_element(k);
            co = co.max(g.comultiply(&x, CoproductMode::GSymbol).max_diff(&g.comultiply(&x, CoproductMode::FSymbol)));
        }
    }
    let mut paths = 0f64;
    for c in CATS {
        let cat = builtin_category(c).unwrap();
        for l in LATS {
            let lat = builtin_lattice(l).unwrap();
            let lw = LevinWenModel::new(&cat, &lat).unwrap();
            for f in 0..lat.num_faces() {
                for mu in 0..cat.rank() {
                    let a = lw.plaquette_matrix(f, Flux::Label(mu), PlaquettePath::GSymbol);
                    let b = lw.plaquette_matrix(f, Flux::Label(mu), PlaquettePath::FSymbol);
                    paths = paths.max(linalg::max_abs(&(a - b)));
                }
            }
            if l == "honeycomb_torus(2,2)" && c == "fibonacci" {
                let rep = verify_plaquettes(&lw, 1e-10);
                if !rep.passed() {
                    return ok(false, format!("Levin-Wen plaquettes\n{}", rep.to_text()));
                }
            }
        }
    }
    ok(co < 1e-11 && paths < 1e-10, format!("coproduct forms {co:.2e}, plaquette paths {paths:.2e}"))
}

fn criterion_10() -> Outcome {
    let mut ring = FusionCategory::empty("rep_s3", vec!["1".into(), "s".into(), "2".into()], vec![1.0, 1.0, 2.0]);
    for (a, b, c) in [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 1, 0), (1, 2, 2), (2, 2, 0), (2, 2, 1), (2, 2, 2)] {
        for [x, y, z] in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
            ring.set_adm(x, y, z, true);
        }
    }
    let blocks = block_dimensions(&ring);
    let dim: usize = blocks.iter().map(|b| b * b).sum();
    ok(blocks == vec![3, 3, 5] && dim == 43, format!("blocks {blocks:?}, dim {dim}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("Fibonacci category verification", criterion_1),
        ("H_Fibonacci dimension, axioms, blocks", criterion_2),
        ("TLJ relations", criterion_3),
        ("canonical elements", criterion_4),
        ("representation theory", criterion_5),
        ("Kitaev stabilizers and site algebra", criterion_6),
        ("ground-state degeneracies", criterion_7),
        ("Θ intertwining", criterion_8),
        ("cross-formula checks", criterion_9),
        ("Rep(S3) dimension count", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        failed += !o.pass as usize;
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
