use stringnet::lattice::*;
use stringnet::Error;

fn counts(l: &SurfaceLattice) -> (usize, usize, usize, usize) {
    (l.num_vertices(), l.num_edges(), l.num_faces(), l.genus)
}

fn face_lengths(l: &SurfaceLattice) -> Vec<usize> {
    let mut v: Vec<usize> = (0..l.num_faces()).map(|f| l.face_sides(f).len()).collect();
    v.sort();
    v
}

fn check_partition(l: &SurfaceLattice) {
    let mut seen = vec![0usize; l.num_half_edges()];
    for f in 0..l.num_faces() {
        let sides = l.face_sides(f);
        for (k, &h) in sides.iter().enumerate() {
            seen[h] += 1;
            assert_eq!(l.face_of_side(h), f);
            assert_eq!(l.next_side(h), sides[(k + 1) % sides.len()]);
        }
    }
    assert!(seen.iter().all(|&c| c == 1));
    assert_eq!(seen.len(), 2 * l.num_edges());
}

#[test]
fn theta_sphere() {
    let l = builtin_lattice("theta_sphere").unwrap();
    assert_eq!(counts(&l), (2, 3, 3, 0));
    assert_eq!(face_lengths(&l), vec![2, 2, 2]);
    assert!(l.all_faces_embedded());
    check_partition(&l);
}

#[test]
fn k4_torus() {
    let l = builtin_lattice("k4_torus").unwrap();
    assert_eq!(counts(&l), (4, 6, 2, 1));
    assert_eq!(face_lengths(&l), vec![4, 8]);
    assert!(l.check_supported().is_ok());
    check_partition(&l);
}

/// Every rotation system of K4: two cyclic orders per vertex.
#[test]
fn k4_rotation_systems() {
    let edges: [[usize; 2]; 6] = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
    let mut at: Vec<Vec<usize>> = vec![Vec::new(); 4];
    for (e, &[u, v]) in edges.iter().enumerate() {
        at[u].push(2 * e);
        at[v].push(2 * e + 1);
    }
    let mut torus_splits = Vec::new();
    for mask in 0..16u32 {
        let vertices: Vec<Vec<usize>> = (0..4)
            .map(|v| {
                let h = &at[v];
                if mask >> v & 1 == 0 { vec![h[0], h[1], h[2]] } else { vec![h[0], h[2], h[1]] }
            })
            .collect();
        let file = LatticeFile { name: None, vertices, edges: (0..6).map(|e| [2 * e, 2 * e + 1]).collect() };
        let l = SurfaceLattice::from_file(&file).unwrap();
        if l.genus == 1 && l.num_faces() == 2 {
            torus_splits.push(face_lengths(&l));
        }
    }
    assert!(!torus_splits.is_empty());
    assert!(torus_splits.iter().all(|s| s != &vec![6, 6]));
    assert!(torus_splits.contains(&vec![4, 8]));
}

#[test]
fn honeycomb() {
    let l = builtin_lattice("honeycomb_torus(2,2)").unwrap();
    assert_eq!(counts(&l), (8, 12, 4, 1));
    assert!(l.all_faces_embedded());
    check_partition(&l);
    let l = builtin_lattice("honeycomb_torus(3,2)").unwrap();
    assert_eq!(counts(&l), (12, 18, 6, 1));
    assert!(face_lengths(&l).iter().all(|&n| n == 6));
}

#[test]
fn reversal_keeps_incidence() {
    let l = builtin_lattice("k4_torus").unwrap();
    for e in 0..l.num_edges() {
        let r = l.with_edge_reversed(e);
        assert_eq!(counts(&r), counts(&l));
        for f in 0..l.num_faces() {
            assert_eq!(r.face_sides(f), l.face_sides(f));
        }
        assert_eq!(r.is_tail(2 * e), !l.is_tail(2 * e));
    }
}

#[test]
fn json_round_trip() {
    let l = builtin_lattice("honeycomb_torus(2,2)").unwrap();
    let text = serde_json::to_string(&l.to_file()).unwrap();
    let back = build_lattice(&text).unwrap();
    assert_eq!(counts(&back), counts(&l));
}

#[test]
fn rejects_bad_input() {
    let two = r#"{"vertices":[[0,2],[1,3]],"edges":[[0,1],[2,3]]}"#;
    assert!(matches!(build_lattice(two), Err(Error::Lattice(_))));
    let loop_ = r#"{"vertices":[[0,1,2],[3,4,5]],"edges":[[0,1],[2,3],[4,5]]}"#;
    assert!(matches!(build_lattice(loop_), Err(Error::Lattice(_))));
    assert!(matches!(builtin_lattice("cube"), Err(Error::UnknownName(_))));
}

#[test]
fn one_face_torus_unsupported() {
    let text = r#"{"vertices":[[0,2,4],[1,3,5]],"edges":[[0,1],[2,3],[4,5]]}"#;
    let l = build_lattice(text).unwrap();
    assert_eq!(counts(&l), (2, 3, 1, 1));
    assert!(!l.all_faces_embedded());
    assert!(matches!(l.check_supported(), Err(Error::Lattice(_))));
}
