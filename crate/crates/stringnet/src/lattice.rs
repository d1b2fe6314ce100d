//! Trivalent lattices on closed oriented surfaces as combinatorial maps.
//!
//! Half-edge `h` sits at vertex `vertex_of(h)`; `rot(h)` is the next half-edge
//! counterclockwise at that vertex and `twin(h)` the other end of the edge.
//! Faces are orbits of `h ↦ rot(twin(h))`. A half-edge `h` read as a side
//! means the walk from `vertex_of(h)` to `vertex_of(twin(h))`; the face of
//! that side lies to the right of the walk, so faces are traversed clockwise.

use serde::{Deserialize, Serialize};

use crate::Error;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeFile {
    #[serde(default)]
    pub name: Option<String>,
    pub vertices: Vec<Vec<usize>>,
    pub edges: Vec<[usize; 2]>,
}

/// A corner of a face: the angle at `vertex` between half-edge `he` and
/// `rot(he)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Site {
    pub vertex: usize,
    pub face: usize,
    pub he: usize,
}

#[derive(Clone, Debug)]
pub struct SurfaceLattice {
    pub name: String,
    he_vertex: Vec<usize>,
    rot: Vec<usize>,
    he_edge: Vec<usize>,
    he_is_tail: Vec<bool>,
    edge_he: Vec<[usize; 2]>,
    vertex_he: Vec<[usize; 3]>,
    faces: Vec<Vec<usize>>,
    he_face: Vec<usize>,
    pub genus: usize,
}

impl SurfaceLattice {
    pub fn from_file(f: &LatticeFile) -> Result<Self, Error> {
        let ne = f.edges.len();
        let nh = 2 * ne;
        let mut he_edge = vec![usize::MAX; nh];
        let mut he_is_tail = vec![false; nh];
        for (e, &[t, h]) in f.edges.iter().enumerate() {
            for (x, tail) in [(t, true), (h, false)] {
                if x >= nh {
                    return Err(Error::Lattice(format!("half-edge {x} out of range (need ids < {nh})")));
                }
                if he_edge[x] != usize::MAX {
                    return Err(Error::Lattice(format!("half-edge {x} used by two edges")));
                }
                he_edge[x] = e;
                he_is_tail[x] = tail;
            }
        }
        let mut he_vertex = vec![usize::MAX; nh];
        let mut rot = vec![usize::MAX; nh];
        let mut vertex_he = Vec::new();
        for (v, hs) in f.vertices.iter().enumerate() {
            if hs.len() != 3 {
                return Err(Error::Lattice(format!("vertex {v} has {} half-edges, expected 3", hs.len())));
            }
            for (k, &h) in hs.iter().enumerate() {
                if h >= nh {
                    return Err(Error::Lattice(format!("half-edge {h} out of range")));
                }
                if he_vertex[h] != usize::MAX {
                    return Err(Error::Lattice(format!("half-edge {h} listed at two vertices")));
                }
                he_vertex[h] = v;
                rot[h] = hs[(k + 1) % 3];
            }
            vertex_he.push([hs[0], hs[1], hs[2]]);
        }
        if let Some(h) = he_vertex.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Lattice(format!("half-edge {h} not attached to a vertex")));
        }
        let edge_he: Vec<[usize; 2]> = f.edges.clone();
        for (e, &[t, h]) in edge_he.iter().enumerate() {
            if he_vertex[t] == he_vertex[h] {
                return Err(Error::Lattice(format!("edge {e} is a self-loop")));
            }
        }
        let mut lat = SurfaceLattice {
            name: f.name.clone().unwrap_or_else(|| "custom".into()),
            he_vertex,
            rot,
            he_edge,
            he_is_tail,
            edge_he,
            vertex_he,
            faces: Vec::new(),
            he_face: vec![usize::MAX; nh],
            genus: 0,
        };
        lat.trace_faces();
        let chi = lat.num_vertices() as i64 - lat.num_edges() as i64 + lat.num_faces() as i64;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(Error::Lattice(format!("Euler characteristic {chi} is not that of a closed oriented surface")));
        }
        lat.genus = ((2 - chi) / 2) as usize;
        Ok(lat)
    }

    fn trace_faces(&mut self) {
        let nh = self.he_vertex.len();
        for h0 in 0..nh {
            if self.he_face[h0] != usize::MAX {
                continue;
            }
            let f = self.faces.len();
            let mut walk = Vec::new();
            let mut h = h0;
            while self.he_face[h] == usize::MAX {
                self.he_face[h] = f;
                walk.push(h);
                h = self.next_side(h);
            }
            self.faces.push(walk);
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_he.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_he.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.he_vertex.len()
    }

    #[inline]
    pub fn twin(&self, h: usize) -> usize {
        let [t, hd] = self.edge_he[self.he_edge[h]];
        if h == t {
            hd
        } else {
            t
        }
    }

    #[inline]
    pub fn rot(&self, h: usize) -> usize {
        self.rot[h]
    }

    /// Face permutation.
    #[inline]
    pub fn next_side(&self, h: usize) -> usize {
        self.rot[self.twin(h)]
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.he_vertex[h]
    }

    pub fn edge_of(&self, h: usize) -> usize {
        self.he_edge[h]
    }

    /// Whether `h` is the tail end of its edge.
    pub fn is_tail(&self, h: usize) -> bool {
        self.he_is_tail[h]
    }

    /// `[tail, head]` half-edges of an edge.
    pub fn edge_ends(&self, e: usize) -> [usize; 2] {
        self.edge_he[e]
    }

    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        let [t, h] = self.edge_he[e];
        [self.he_vertex[t], self.he_vertex[h]]
    }

    /// Half-edges at `v` in counterclockwise order.
    pub fn vertex_half_edges(&self, v: usize) -> [usize; 3] {
        self.vertex_he[v]
    }

    /// Sides of face `f` in walk order.
    pub fn face_sides(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }

    pub fn face_of_side(&self, h: usize) -> usize {
        self.he_face[h]
    }

    /// Face occupying the corner between `h` and `rot(h)`.
    pub fn corner_face(&self, h: usize) -> usize {
        self.he_face[self.rot[h]]
    }

    /// Whether `f` visits every edge at most once.
    pub fn face_is_embedded(&self, f: usize) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.faces[f].iter().all(|&h| seen.insert(self.he_edge[h]))
    }

    /// No face boundary repeats an edge.
    pub fn all_faces_embedded(&self) -> bool {
        (0..self.num_faces()).all(|f| self.face_is_embedded(f))
    }

    /// Models are supported when no vertex has all three corners in one face.
    pub fn check_supported(&self) -> Result<(), Error> {
        for v in 0..self.num_vertices() {
            let fs = self.vertex_he[v].map(|h| self.corner_face(h));
            if fs[0] == fs[1] && fs[1] == fs[2] {
                return Err(Error::Lattice(format!(
                    "vertex {v} has all three corners in face {}; not supported",
                    fs[0]
                )));
            }
        }
        Ok(())
    }

    /// All corners, one per (vertex, half-edge).
    pub fn sites(&self) -> Vec<Site> {
        (0..self.num_half_edges())
            .map(|h| Site { vertex: self.he_vertex[h], face: self.corner_face(h), he: h })
            .collect()
    }

    /// Corners of face `f` at vertex `v`.
    pub fn sites_at(&self, v: usize, f: usize) -> Vec<Site> {
        self.vertex_he[v]
            .iter()
            .filter(|&&h| self.corner_face(h) == f)
            .map(|&h| Site { vertex: v, face: f, he: h })
            .collect()
    }

    /// Same lattice with edge `e` reversed.
    pub fn with_edge_reversed(&self, e: usize) -> SurfaceLattice {
        let mut l = self.clone();
        let [t, h] = l.edge_he[e];
        l.edge_he[e] = [h, t];
        l.he_is_tail[t] = false;
        l.he_is_tail[h] = true;
        l
    }

    pub fn to_file(&self) -> LatticeFile {
        LatticeFile {
            name: Some(self.name.clone()),
            vertices: self.vertex_he.iter().map(|v| v.to_vec()).collect(),
            edges: self.edge_he.clone(),
        }
    }
}

pub fn build_lattice(text: &str) -> Result<SurfaceLattice, Error> {
    let f: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    SurfaceLattice::from_file(&f)
}

/// Rotation system of the genus-one K4 map with faces of length 4 and 8.
/// Half-edges `2e` and `2e+1` are the tail and head of edge `e`; the edges
/// are 01 02 03 12 13 23.
pub const K4_TORUS_ROTATION: [[usize; 3]; 4] = [[0, 2, 4], [1, 6, 8], [3, 7, 10], [5, 9, 11]];

pub fn builtin_lattice(name: &str) -> Result<SurfaceLattice, Error> {
    let simple_edges = |n: usize| (0..n).map(|e| [2 * e, 2 * e + 1]).collect::<Vec<_>>();
    let named = |n: &str, vertices: Vec<Vec<usize>>, edges: Vec<[usize; 2]>| {
        SurfaceLattice::from_file(&LatticeFile { name: Some(n.into()), vertices, edges })
    };
    if name == "theta_sphere" {
        return named(name, vec![vec![0, 2, 4], vec![5, 3, 1]], simple_edges(3));
    }
    if name == "k4_torus" {
        return named(name, K4_TORUS_ROTATION.iter().map(|v| v.to_vec()).collect(), simple_edges(6));
    }
    if let Some(args) = name.strip_prefix("honeycomb_torus(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').map(|s| s.trim()).collect();
        if parts.len() != 2 {
            return Err(Error::UnknownName(name.into()));
        }
        let m: usize = parts[0].parse().map_err(|_| Error::UnknownName(name.into()))?;
        let n: usize = parts[1].parse().map_err(|_| Error::UnknownName(name.into()))?;
        return honeycomb_torus(m, n);
    }
    Err(Error::UnknownName(name.into()))
}

/// Brick-wall honeycomb on an `m × n` torus. Cell `(x,y)` holds vertices
/// `A = 2c`, `B = 2c+1` with `c = x·n + y`, and edges `3c` (A–B same cell),
/// `3c+1` (A–B of cell `(x−1,y)`), `3c+2` (A–B of cell `(x,y−1)`), each
/// oriented from A to B.
pub fn honeycomb_torus(m: usize, n: usize) -> Result<SurfaceLattice, Error> {
    if m < 2 || n < 2 {
        return Err(Error::Invalid(format!("honeycomb_torus needs m,n >= 2, got ({m},{n})")));
    }
    let cell = |x: usize, y: usize| (x % m) * n + (y % n);
    let nc = m * n;
    let edges: Vec<[usize; 2]> = (0..3 * nc).map(|e| [2 * e, 2 * e + 1]).collect();
    let tail = |e: usize| 2 * e;
    let head = |e: usize| 2 * e + 1;
    let mut vertices = vec![Vec::new(); 2 * nc];
    for x in 0..m {
        for y in 0..n {
            let c = cell(x, y);
            // A: neighbours at -30°, 90°, 210°
            vertices[2 * c] = vec![tail(3 * c + 2), tail(3 * c), tail(3 * c + 1)];
            // B: neighbours A(x+1,y) at 30°, A(x,y+1) at 150°, A(x,y) at 270°
            let right = cell(x + 1, y);
            let up = cell(x, y + 1);
            vertices[2 * c + 1] = vec![head(3 * right + 1), head(3 * up + 2), head(3 * c)];
        }
    }
    SurfaceLattice::from_file(&LatticeFile { name: Some(format!("honeycomb_torus({m},{n})")), vertices, edges })
}
