//! Levin–Wen model on edge labelings.
//!
//! The plaquette operator inserts a `μ` loop in the face, fuses it into each
//! boundary side and removes the bubble left at each corner. A face that
//! visits an edge twice fuses the loop into that edge twice: the label goes
//! `i → t → j`, and the corner next to the first-fused side is removed first.

use std::collections::HashMap;

use crate::fusion_data::FusionCategory;
use crate::lattice::SurfaceLattice;
use crate::report::VerificationReport;
use crate::linalg::{self, CMat};
use crate::{Error, C64};

/// How plaquette coefficients are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaquettePath {
    /// Side factors `√(d_j/(d_i d_μ))`, one symmetric 6j-symbol per corner.
    GSymbol,
    /// Side factors from the F-move `F^{iμμ}_{i;1j}`, corners via `θ/d · F`.
    FSymbol,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flux {
    Label(usize),
    Full,
}

#[derive(Clone, Debug)]
struct Pop {
    vertex: usize,
    /// Edge of the side arriving at the corner in walk order.
    e_in: usize,
    /// Edge of the side leaving the corner.
    e_out: usize,
    third: usize,
}

#[derive(Clone, Debug)]
struct FacePlan {
    edges: Vec<usize>,
    /// Number of sides of the face on each edge in `edges`.
    mult: Vec<usize>,
    /// Side list as (edge, rank) with rank 1 or 2.
    sides: Vec<(usize, usize)>,
    pops: Vec<Pop>,
}

pub struct LevinWenModel<'a> {
    pub cat: &'a FusionCategory,
    pub lat: &'a SurfaceLattice,
    plans: Vec<FacePlan>,
    labelings: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

/// Dense vector over all edge labelings, edge 0 least significant.
#[derive(Clone, Debug)]
pub struct LWState {
    pub amps: Vec<C64>,
}

fn plan_face(lat: &SurfaceLattice, f: usize) -> Result<FacePlan, Error> {
    let sides = lat.face_sides(f);
    let mut edges: Vec<usize> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    let mut side_rank = Vec::new();
    for &h in sides {
        let e = lat.edge_of(h);
        match edges.iter().position(|&x| x == e) {
            Some(p) => {
                mult[p] += 1;
                side_rank.push((e, mult[p]));
            }
            None => {
                edges.push(e);
                mult.push(1);
                side_rank.push((e, 1));
            }
        }
    }
    let l = sides.len();
    // corner k sits between side k and side k+1
    let corners: Vec<(usize, usize, usize, usize, usize, usize)> = (0..l)
        .map(|k| {
            let s_in = sides[k];
            let s_out = sides[(k + 1) % l];
            let v = lat.vertex_of(s_out);
            let arrive = lat.twin(s_in);
            let third_he = lat.vertex_half_edges(v).into_iter().find(|&h| h != arrive && h != s_out).unwrap();
            (v, side_rank[k].0, side_rank[k].1, side_rank[(k + 1) % l].0, side_rank[(k + 1) % l].1, lat.edge_of(third_he))
        })
        .collect();
    let mut level: HashMap<(usize, usize), usize> = HashMap::new();
    let mut done = vec![false; l];
    let mut pops = Vec::new();
    while pops.len() < l {
        let before = pops.len();
        for (k, &(v, ei, ri, eo, ro, e3)) in corners.iter().enumerate() {
            if done[k] {
                continue;
            }
            let li = *level.get(&(v, ei)).unwrap_or(&1);
            let lo = *level.get(&(v, eo)).unwrap_or(&1);
            if li == ri && lo == ro {
                done[k] = true;
                *level.entry((v, ei)).or_insert(1) += 1;
                *level.entry((v, eo)).or_insert(1) += 1;
                pops.push(Pop { vertex: v, e_in: ei, e_out: eo, third: e3 });
            }
        }
        if pops.len() == before {
            return Err(Error::Lattice(format!("face {f}: corner bubbles cannot be ordered")));
        }
    }
    Ok(FacePlan { edges, mult, sides: side_rank, pops })
}

impl<'a> LevinWenModel<'a> {
    pub fn new(cat: &'a FusionCategory, lat: &'a SurfaceLattice) -> Result<Self, Error> {
        lat.check_supported()?;
        let plans = (0..lat.num_faces()).map(|f| plan_face(lat, f)).collect::<Result<Vec<_>, _>>()?;
        let labelings = admissible_labelings(cat, lat);
        let index = labelings.iter().enumerate().map(|(k, l)| (l.clone(), k)).collect();
        Ok(Self { cat, lat, plans, labelings, index })
    }

    pub fn full_dim(&self) -> usize {
        self.cat.rank().pow(self.lat.num_edges() as u32)
    }

    /// Admissible labelings, the basis of `L^LW_0`.
    pub fn labelings(&self) -> &[Vec<usize>] {
        &self.labelings
    }

    pub fn labeling_index(&self, l: &[usize]) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn vertex_admissible(&self, v: usize, labels: &[usize]) -> bool {
        let [a, b, c] = self.lat.vertex_half_edges(v).map(|h| labels[self.lat.edge_of(h)]);
        self.cat.adm(a, b, c)
    }

    /// `A^LW_v` on a basis labeling: 1 or 0.
    pub fn vertex_projector(&self, v: usize, labels: &[usize]) -> f64 {
        if self.vertex_admissible(v, labels) {
            1.0
        } else {
            0.0
        }
    }

    fn side_factor(&self, old: usize, mu: usize, new: usize, path: PlaquettePath) -> C64 {
        if !self.cat.adm(old, mu, new) {
            return linalg::zero();
        }
        match path {
            PlaquettePath::GSymbol => {
                C64::new((self.cat.qdim(new) / (self.cat.qdim(old) * self.cat.qdim(mu))).sqrt(), 0.0)
            }
            PlaquettePath::FSymbol => self.cat.f(old, mu, mu, old, 0, new),
        }
    }

    /// Corner factor `G^{a b c}_{k m n}`.
    fn corner_factor(&self, a: usize, b: usize, c: usize, k: usize, m: usize, n: usize, path: PlaquettePath) -> C64 {
        match path {
            PlaquettePath::GSymbol => self.cat.g(a, b, c, k, m, n),
            PlaquettePath::FSymbol => {
                let adm = self.cat.adm(a, m, n) && self.cat.adm(n, k, b) && self.cat.adm(m, k, c) && self.cat.adm(a, c, b);
                match (adm, self.cat.theta_symbol(m, c, k)) {
                    (true, Ok(th)) => self.cat.f(a, m, k, b, c, n) * (th / self.cat.qdim(c)),
                    _ => linalg::zero(),
                }
            }
        }
    }

    /// Nonzero matrix elements `⟨j| B^μ_p |i⟩` for a basis labeling `i`.
    pub fn plaquette_column(&self, f: usize, mu: usize, labels: &[usize], path: PlaquettePath) -> Vec<(Vec<usize>, C64)> {
        let plan = &self.plans[f];
        let r = self.cat.rank();
        // new labels per edge on the face, one per extra level
        let slots: usize = plan.mult.iter().sum();
        let mut out = Vec::new();
        let mut assign = vec![0usize; slots];
        let total = r.pow(slots as u32);
        let pos: HashMap<usize, usize> = plan.edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();
        let offsets: Vec<usize> = plan
            .mult
            .iter()
            .scan(0, |acc, &m| {
                let o = *acc;
                *acc += m;
                Some(o)
            })
            .collect();
        for code in 0..total {
            let mut c = code;
            for s in assign.iter_mut() {
                *s = c % r;
                c /= r;
            }
            // label of edge e at level lev (0 = original)
            let lab = |e: usize, lev: usize| -> usize {
                if lev == 0 {
                    labels[e]
                } else {
                    match pos.get(&e) {
                        Some(&p) => assign[offsets[p] + lev - 1],
                        None => labels[e],
                    }
                }
            };
            let mut coef = C64::new(1.0, 0.0);
            for &(e, rank) in &plan.sides {
                coef *= self.side_factor(lab(e, rank - 1), mu, lab(e, rank), path);
                if coef == linalg::zero() {
                    break;
                }
            }
            if coef == linalg::zero() {
                continue;
            }
            let mut level: HashMap<(usize, usize), usize> = HashMap::new();
            for p in &plan.pops {
                let li = *level.get(&(p.vertex, p.e_in)).unwrap_or(&0);
                let lo = *level.get(&(p.vertex, p.e_out)).unwrap_or(&0);
                let l3 = *level.get(&(p.vertex, p.third)).unwrap_or(&0);
                let k = lab(p.third, l3);
                let (i_in, j_in) = (lab(p.e_in, li), lab(p.e_in, li + 1));
                let (i_out, j_out) = (lab(p.e_out, lo), lab(p.e_out, lo + 1));
                // counterclockwise around the face the walk is reversed
                coef *= self.corner_factor(k, j_in, j_out, mu, i_out, i_in, path);
                if coef == linalg::zero() {
                    break;
                }
                *level.entry((p.vertex, p.e_in)).or_insert(0) += 1;
                *level.entry((p.vertex, p.e_out)).or_insert(0) += 1;
            }
            if coef.norm() < 1e-15 {
                continue;
            }
            let mut new = labels.to_vec();
            for (p, &e) in plan.edges.iter().enumerate() {
                new[e] = assign[offsets[p] + plan.mult[p] - 1];
            }
            out.push((new, coef));
        }
        // merge duplicates produced by different intermediate labels
        let mut merged: HashMap<Vec<usize>, C64> = HashMap::new();
        for (k, v) in out {
            *merged.entry(k).or_insert(linalg::zero()) += v;
        }
        let mut v: Vec<_> = merged.into_iter().filter(|(_, c)| c.norm() > 1e-14).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// `B^μ_p` (or the full `B_p`) as a matrix on the admissible subspace.
    pub fn plaquette_matrix(&self, f: usize, flux: Flux, path: PlaquettePath) -> CMat {
        let n = self.labelings.len();
        let mut m = CMat::zeros(n, n);
        let dd = self.cat.total_dim_sq();
        let mus: Vec<(usize, f64)> = match flux {
            Flux::Label(mu) => vec![(mu, 1.0)],
            Flux::Full => (0..self.cat.rank()).map(|mu| (mu, self.cat.qdim(mu) / dd)).collect(),
        };
        for (col, l) in self.labelings.iter().enumerate() {
            for &(mu, w) in &mus {
                for (new, c) in self.plaquette_column(f, mu, l, path) {
                    match self.index.get(&new) {
                        Some(&row) => m[(row, col)] += c * w,
                        None => panic!("plaquette left the admissible subspace"),
                    }
                }
            }
        }
        m
    }

    pub fn plaquette_operator(&self, f: usize, flux: Flux) -> CMat {
        self.plaquette_matrix(f, flux, PlaquettePath::GSymbol)
    }

    /// Apply `B^LW_p` to a state on the full labeling space.
    pub fn apply_plaquette(&self, f: usize, flux: Flux, psi: &LWState) -> LWState {
        let dd = self.cat.total_dim_sq();
        let mut out = vec![linalg::zero(); psi.amps.len()];
        let r = self.cat.rank();
        let ne = self.lat.num_edges();
        for (idx, &a) in psi.amps.iter().enumerate() {
            if a == linalg::zero() {
                continue;
            }
            let labels = decode(idx, r, ne);
            if !(0..self.lat.num_vertices()).all(|v| self.vertex_admissible(v, &labels)) {
                continue;
            }
            let mus: Vec<(usize, f64)> = match flux {
                Flux::Label(mu) => vec![(mu, 1.0)],
                Flux::Full => (0..r).map(|mu| (mu, self.cat.qdim(mu) / dd)).collect(),
            };
            for (mu, w) in mus {
                for (new, c) in self.plaquette_column(f, mu, &labels, PlaquettePath::GSymbol) {
                    out[encode(&new, r)] += a * c * w;
                }
            }
        }
        LWState { amps: out }
    }

    pub fn apply_vertex(&self, v: usize, psi: &LWState) -> LWState {
        let r = self.cat.rank();
        let ne = self.lat.num_edges();
        let amps = psi
            .amps
            .iter()
            .enumerate()
            .map(|(idx, &a)| a * self.vertex_projector(v, &decode(idx, r, ne)))
            .collect();
        LWState { amps }
    }

    pub fn basis_state(&self, labels: &[usize]) -> LWState {
        let mut amps = vec![linalg::zero(); self.full_dim()];
        amps[encode(labels, self.cat.rank())] = linalg::one();
        LWState { amps }
    }
}

pub fn encode(labels: &[usize], r: usize) -> usize {
    labels.iter().rev().fold(0, |acc, &l| acc * r + l)
}

pub fn decode(mut idx: usize, r: usize, ne: usize) -> Vec<usize> {
    (0..ne)
        .map(|_| {
            let l = idx % r;
            idx /= r;
            l
        })
        .collect()
}

/// Edge labelings admissible at every vertex, in lexicographic order of the
/// reversed label vector (the full-space index order).
pub fn admissible_labelings(cat: &FusionCategory, lat: &SurfaceLattice) -> Vec<Vec<usize>> {
    let r = cat.rank();
    let ne = lat.num_edges();
    let mut out = Vec::new();
    let mut labels = vec![0usize; ne];
    // depth-first over edges with pruning at completed vertices
    let mut last_edge = vec![0usize; lat.num_vertices()];
    for (v, le) in last_edge.iter_mut().enumerate() {
        *le = lat.vertex_half_edges(v).iter().map(|&h| lat.edge_of(h)).max().unwrap();
    }
    let mut by_edge: Vec<Vec<usize>> = vec![Vec::new(); ne];
    for (v, &le) in last_edge.iter().enumerate() {
        by_edge[le].push(v);
    }
    fn rec(
        e: usize,
        labels: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cat: &FusionCategory,
        lat: &SurfaceLattice,
        by_edge: &[Vec<usize>],
        r: usize,
    ) {
        if e == labels.len() {
            out.push(labels.clone());
            return;
        }
        for l in 0..r {
            labels[e] = l;
            let ok = by_edge[e].iter().all(|&v| {
                let [a, b, c] = lat.vertex_half_edges(v).map(|h| labels[lat.edge_of(h)]);
                cat.adm(a, b, c)
            });
            if ok {
                rec(e + 1, labels, out, cat, lat, by_edge, r);
            }
        }
    }
    rec(0, &mut labels, &mut out, cat, lat, &by_edge, r);
    out.sort_by_key(|l| encode(l, r));
    out
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct LwGsd {
    pub gsd: usize,
    pub trace: f64,
    pub dim_l0: usize,
    pub full_dim: usize,
}

/// Ground-space dimension as the rank of `∏ B_p` on `L^LW_0`.
pub fn lw_ground_space_dimension(model: &LevinWenModel) -> Result<LwGsd, Error> {
    let full = model.full_dim();
    if full > 1 << 24 {
        return Err(Error::TooLarge(format!("{full} labelings")));
    }
    let n = model.labelings.len();
    let mut p = CMat::identity(n, n);
    for f in 0..model.lat.num_faces() {
        p = model.plaquette_operator(f, Flux::Full) * p;
    }
    let trace = p.trace().re;
    let gsd = linalg::rank(&p, 1e-8);
    Ok(LwGsd { gsd, trace, dim_l0: n, full_dim: full })
}

/// Plaquette checks on `L^LW_0`: Hermitian, idempotent, pairwise commuting,
/// `B^1_p = 1`, and agreement of the two coefficient paths for every flux.
pub fn verify_plaquettes(model: &LevinWenModel, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("levin-wen:{}:{}", model.cat.name, model.lat.name));
    let nf = model.lat.num_faces();
    let n = model.labelings.len();
    let bs: Vec<CMat> = (0..nf).map(|f| model.plaquette_operator(f, Flux::Full)).collect();
    let (mut herm, mut idem, mut comm, mut unit, mut paths) = (0f64, 0f64, 0f64, 0f64, 0f64);
    for (f, b) in bs.iter().enumerate() {
        herm = herm.max(linalg::max_abs(&(b - b.adjoint())));
        idem = idem.max(linalg::max_abs(&(b * b - b)));
        for c in &bs[f + 1..] {
            comm = comm.max(linalg::max_abs(&(b * c - c * b)));
        }
        let one = model.plaquette_matrix(f, Flux::Label(0), PlaquettePath::GSymbol);
        unit = unit.max(linalg::max_abs(&(one - CMat::identity(n, n))));
        for mu in 0..model.cat.rank() {
            let g = model.plaquette_matrix(f, Flux::Label(mu), PlaquettePath::GSymbol);
            let fp = model.plaquette_matrix(f, Flux::Label(mu), PlaquettePath::FSymbol);
            paths = paths.max(linalg::max_abs(&(g - fp)));
        }
    }
    rep.residual("B^LW_p Hermitian", herm, tol);
    rep.residual("B^LW_p idempotent", idem, tol);
    rep.residual("B^LW_p pairwise commuting", comm, tol);
    rep.residual("B^1_p identity", unit, tol);
    rep.residual("G-symbol and F-symbol paths agree", paths, tol);
    rep
}
