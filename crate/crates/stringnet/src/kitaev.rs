//! Generalized Kitaev model on `⊗_edges H_C`.
//!
//! Conventions: an edge end that is the head of its edge carries `L_+`, a
//! tail carries `L_-`. A face lying to the right of an edge (looking along
//! its orientation) carries `T_+`, a face to its left `T_-`. At a site
//! `(v, p)` the vertex coproduct is distributed counterclockwise starting
//! after `p`, and the face coproduct along the counterclockwise walk of `p`
//! starting at `v`: `B_α = Σ ⟨α, y_1 ⋯ y_k⟩ ⊗ remainders` with `y_1` taken
//! from the first edge of that walk.
//!
//! A basis vector `e_{i,r,s}` of an edge has its row pair `r` attached to the
//! head vertex and its column pair `s` attached to the tail vertex.
//!
//! `T_+` pairs with `x(2) g` (pivotal `g`), so `S²` acts trivially on the
//! face operators. States use the edge metric `‖e^{ab}_{i;cd}‖² = d_d/d_c`,
//! in which every `A_v` and `B_p` is Hermitian.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::groupoid::{DualElement, Groupoid, GroupoidElement, TensorElement};
use crate::lattice::{Site, SurfaceLattice};
use crate::linalg::{self, CMat};
use crate::report::VerificationReport;
use crate::{Error, C64};

pub const DEFAULT_SEED: u64 = 0xC0FFEE;
pub const EXACT_LIMIT: usize = 300_000;
pub const DENSE_LIMIT: usize = 5_000_000;

type EdgeMap = Vec<Vec<(usize, C64)>>;

#[derive(Clone, Debug)]
pub struct TensorState {
    pub amps: Vec<C64>,
}

impl TensorState {
    pub fn zeros(n: usize) -> Self {
        Self { amps: vec![linalg::zero(); n] }
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn axpy(&mut self, s: C64, x: &TensorState) {
        for (a, b) in self.amps.iter_mut().zip(&x.amps) {
            *a += s * b;
        }
    }

    pub fn scale(&mut self, s: C64) {
        for a in self.amps.iter_mut() {
            *a *= s;
        }
    }

    pub fn max_diff(&self, o: &TensorState) -> f64 {
        self.amps.iter().zip(&o.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn dot(&self, o: &TensorState) -> C64 {
        self.amps.iter().zip(&o.amps).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Which element defines an operator.
#[derive(Clone, Debug)]
pub enum Provenance {
    Vertex { site: Site },
    Plaquette { site: Site },
    Edge { edge: usize },
}

#[derive(Clone, Debug)]
pub enum SiteAction {
    /// Sparse matrix on the listed edges, by input local index.
    Local { edges: Vec<usize>, cols: Vec<Vec<(usize, C64)>> },
    /// `Σ ⟨α, y_1 ⋯ y_k⟩ ⊗ remainders` along a walk of (edge, uses T_+).
    Walk { sides: Vec<(usize, bool)>, alpha: Vec<C64> },
}

#[derive(Clone, Debug)]
pub struct SiteOperator {
    pub action: SiteAction,
    pub provenance: Provenance,
}

impl SiteOperator {
    pub fn edges(&self) -> Vec<usize> {
        match &self.action {
            SiteAction::Local { edges, .. } => edges.clone(),
            SiteAction::Walk { sides, .. } => {
                let mut e: Vec<usize> = sides.iter().map(|s| s.0).collect();
                e.sort();
                e.dedup();
                e
            }
        }
    }
}

pub struct KitaevModel<'a> {
    pub g: &'a Groupoid,
    pub lat: &'a SurfaceLattice,
    n: usize,
    strides: Vec<usize>,
    dim: usize,
    /// `e_k · e_a`
    lplus: Vec<Vec<Option<(usize, C64)>>>,
    /// `e_a · S(e_k)`
    lminus: Vec<Vec<Option<(usize, C64)>>>,
    /// Per `y`: input `a` ↦ remainder terms, for `T_+` and `T_-`.
    tplus: Vec<EdgeMap>,
    tminus: Vec<EdgeMap>,
    /// Edge metric `‖e^{ab}_{i;cd}‖² = d_d/d_c`.
    weights: Vec<f64>,
    /// Edge metric of the groupoid's `χ` product, `(1/d_i)(d_d/d_c)`.
    chi_weights: Vec<f64>,
}

impl<'a> KitaevModel<'a> {
    pub fn new(g: &'a Groupoid, lat: &'a SurfaceLattice) -> Result<Self, Error> {
        lat.check_supported()?;
        let n = g.dim();
        let ne = lat.num_edges();
        let dim = (n as f64).powi(ne as i32);
        if dim > usize::MAX as f64 / 4.0 {
            return Err(Error::TooLarge(format!("{n}^{ne}")));
        }
        let dim = n.pow(ne as u32);
        let strides = (0..ne).map(|e| n.pow(e as u32)).collect();
        let lplus = (0..n).map(|k| (0..n).map(|a| g.basis_mul(k, a).map(|(z, c)| (z, C64::new(c, 0.0)))).collect()).collect();
        let lminus = (0..n)
            .map(|k| {
                let (sk, s) = g.antipode_basis(k);
                (0..n).map(|a| g.basis_mul(a, sk).map(|(z, c)| (z, s * c))).collect()
            })
            .collect();
        // right multiplication by the pivotal element is diagonal on the basis
        let piv: Vec<f64> = g.basis.elems.iter().map(|e| g.d(e.d) / g.d(e.c)).collect();
        let mut tplus = vec![vec![Vec::new(); n]; n];
        let mut tminus = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for &(p, q, v) in g.delta_basis(a) {
                // T_+: y = x(2) g, remainder x(1)
                tplus[q][a].push((p, v * piv[q]));
                // T_-: y = S^{-1}(x(1)), remainder x(2)
                let (t, s) = g.antipode_inv_basis(p);
                tminus[t][a].push((q, v * s));
            }
        }
        let weights = g.basis.elems.iter().map(|e| g.d(e.d) / g.d(e.c)).collect();
        let chi_weights = (0..n).map(|k| g.basis_norm_sq(k)).collect();
        Ok(Self { g, lat, n, strides, dim, lplus, lminus, tplus, tminus, weights, chi_weights })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn local_dim(&self) -> usize {
        self.n
    }

    pub fn check_dense(&self) -> Result<(), Error> {
        if self.dim > DENSE_LIMIT {
            return Err(Error::TooLarge(format!("dense state of dimension {}", self.dim)));
        }
        Ok(())
    }

    pub fn zero_state(&self) -> TensorState {
        TensorState::zeros(self.dim)
    }

    pub fn basis_state(&self, keys: &[usize]) -> TensorState {
        let mut s = self.zero_state();
        s.amps[self.encode(keys)] = linalg::one();
        s
    }

    pub fn encode(&self, keys: &[usize]) -> usize {
        keys.iter().zip(&self.strides).map(|(k, s)| k * s).sum()
    }

    pub fn decode(&self, mut idx: usize) -> Vec<usize> {
        (0..self.strides.len())
            .map(|_| {
                let k = idx % self.n;
                idx /= self.n;
                k
            })
            .collect()
    }

    pub fn random_state(&self, rng: &mut ChaCha8Rng) -> TensorState {
        let amps = (0..self.dim)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                C64::new(re, im)
            })
            .collect();
        TensorState { amps }
    }

    /// State inner product: per edge `(x, y) = d_i χ(x* y)` on block `i`,
    /// i.e. `χ` with the block factor `1/d_i` removed. Both stabilizer
    /// families are Hermitian for this product.
    pub fn inner(&self, phi: &TensorState, psi: &TensorState) -> C64 {
        self.inner_with(phi, psi, &self.weights)
    }

    /// Product state inner product built from the groupoid's `χ` product.
    pub fn chi_inner(&self, phi: &TensorState, psi: &TensorState) -> C64 {
        self.inner_with(phi, psi, &self.chi_weights)
    }

    fn inner_with(&self, phi: &TensorState, psi: &TensorState, weights: &[f64]) -> C64 {
        let mut acc = linalg::zero();
        for (idx, (a, b)) in phi.amps.iter().zip(&psi.amps).enumerate() {
            if *a == linalg::zero() || *b == linalg::zero() {
                continue;
            }
            acc += a.conj() * b * self.weight_with(idx, weights);
        }
        acc
    }

    fn weight(&self, idx: usize) -> f64 {
        self.weight_with(idx, &self.weights)
    }

    fn weight_with(&self, mut idx: usize, weights: &[f64]) -> f64 {
        let mut w = 1.0;
        for _ in 0..self.strides.len() {
            w *= weights[idx % self.n];
            idx /= self.n;
        }
        w
    }

    /// Add `scale · map(ψ)` on edge `e` into `out`.
    fn edge_map_acc(&self, psi: &[C64], e: usize, map: &EdgeMap, scale: C64, out: &mut [C64]) {
        let s = self.strides[e];
        let block = s * self.n;
        let mut base = 0;
        while base < psi.len() {
            for (a, terms) in map.iter().enumerate() {
                if terms.is_empty() {
                    continue;
                }
                let src = &psi[base + a * s..base + (a + 1) * s];
                for &(b, v) in terms {
                    let f = v * scale;
                    let dst = &mut out[base + b * s..base + (b + 1) * s];
                    for (d, x) in dst.iter_mut().zip(src) {
                        *d += f * x;
                    }
                }
            }
            base += block;
        }
    }

    /// `L^h_+` (`plus`) or `L^h_-` on one edge, as a sparse matrix.
    pub fn l_matrix(&self, h: &GroupoidElement, plus: bool) -> EdgeMap {
        let mut m: Vec<HashMap<usize, C64>> = vec![HashMap::new(); self.n];
        for (k, &c) in h.coeffs.iter().enumerate() {
            if c == linalg::zero() {
                continue;
            }
            let table = if plus { &self.lplus[k] } else { &self.lminus[k] };
            for (a, t) in table.iter().enumerate() {
                if let Some((z, v)) = t {
                    *m[a].entry(*z).or_insert(linalg::zero()) += c * v;
                }
            }
        }
        m.into_iter().map(|h| h.into_iter().collect()).collect()
    }

    /// `T^α_+` (`plus`) or `T^α_-` on one edge.
    pub fn t_matrix(&self, alpha: &DualElement, plus: bool) -> EdgeMap {
        let table = if plus { &self.tplus } else { &self.tminus };
        let mut m: Vec<HashMap<usize, C64>> = vec![HashMap::new(); self.n];
        for (y, map) in table.iter().enumerate() {
            let c = alpha.coeffs[y];
            if c == linalg::zero() {
                continue;
            }
            for (a, terms) in map.iter().enumerate() {
                for &(b, v) in terms {
                    *m[a].entry(b).or_insert(linalg::zero()) += c * v;
                }
            }
        }
        m.into_iter().map(|h| h.into_iter().collect()).collect()
    }

    /// Apply a single-edge map to a state.
    pub fn apply_edge(&self, e: usize, map: &EdgeMap, psi: &TensorState) -> TensorState {
        let mut out = self.zero_state();
        self.edge_map_acc(&psi.amps, e, map, linalg::one(), &mut out.amps);
        out
    }

    /// Half-edges at `v` counterclockwise, starting after the corner `site.he`.
    pub fn vertex_order(&self, site: &Site) -> Vec<usize> {
        let h1 = self.lat.rot(site.he);
        let h2 = self.lat.rot(h1);
        vec![h1, h2, site.he]
    }

    /// Sides of the face of `site` in counterclockwise order starting at the
    /// site vertex. Sides keep their clockwise direction, so side `h` lies on
    /// edge `edge_of(h)` with the face to the right of `h`.
    pub fn face_walk(&self, site: &Site) -> Vec<usize> {
        let start = self.lat.rot(site.he);
        let mut out = vec![start];
        let mut h = self.lat.next_side(start);
        while h != start {
            out.push(h);
            h = self.lat.next_side(h);
        }
        out.reverse();
        out
    }

    /// Sparse local matrix for `Σ c ⊗_n L^{k_n}_{±}` over distinct edges.
    fn local_from_terms(&self, t: &TensorElement, plus: &[bool]) -> EdgeMap {
        let k = plus.len();
        let n = self.n;
        let ldim = n.pow(k as u32);
        let mut cols: Vec<HashMap<usize, C64>> = vec![HashMap::new(); ldim];
        for (key, &c) in &t.terms {
            for (l, col) in cols.iter_mut().enumerate() {
                let mut rem = l;
                let mut out = 0;
                let mut stride = 1;
                let mut v = c;
                let mut ok = true;
                for f in 0..k {
                    let a = rem % n;
                    rem /= n;
                    let table = if plus[f] { &self.lplus[key[f]] } else { &self.lminus[key[f]] };
                    match table[a] {
                        Some((z, w)) => {
                            out += z * stride;
                            v *= w;
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                    stride *= n;
                }
                if ok {
                    *col.entry(out).or_insert(linalg::zero()) += v;
                }
            }
        }
        cols.into_iter().map(|h| h.into_iter().filter(|(_, v)| v.norm() > 1e-15).collect()).collect()
    }

    /// Iterated coproduct `Δ^{(k-1)}(h)`.
    pub fn iterated_coproduct(&self, h: &GroupoidElement, k: usize) -> TensorElement {
        let mut t = self.g.tensor_of(&[h]);
        for _ in 1..k {
            let last = t.factors - 1;
            t = self.g.delta_on_factor(&t, last);
        }
        t
    }

    /// `A_h(v, p)` at the corner `site`.
    pub fn vertex_operator(&self, h: &GroupoidElement, site: &Site) -> Result<SiteOperator, Error> {
        if self.lat.vertex_of(site.he) != site.vertex || self.lat.corner_face(site.he) != site.face {
            return Err(Error::Invalid(format!("face {} is not adjacent to vertex {} at this corner", site.face, site.vertex)));
        }
        let order = self.vertex_order(site);
        let edges: Vec<usize> = order.iter().map(|&x| self.lat.edge_of(x)).collect();
        let plus: Vec<bool> = order.iter().map(|&x| !self.lat.is_tail(x)).collect();
        let t = self.iterated_coproduct(h, order.len());
        let cols = self.local_from_terms(&t, &plus);
        Ok(SiteOperator { action: SiteAction::Local { edges, cols }, provenance: Provenance::Vertex { site: *site } })
    }

    /// `B_α(v, p)` at the corner `site`.
    pub fn plaquette_operator(&self, alpha: &DualElement, site: &Site) -> Result<SiteOperator, Error> {
        if self.lat.vertex_of(site.he) != site.vertex || self.lat.corner_face(site.he) != site.face {
            return Err(Error::Invalid(format!("vertex {} is not on face {} at this corner", site.vertex, site.face)));
        }
        let sides = self.face_walk(site).into_iter().map(|h| (self.lat.edge_of(h), self.lat.is_tail(h))).collect();
        Ok(SiteOperator {
            action: SiteAction::Walk { sides, alpha: alpha.coeffs.clone() },
            provenance: Provenance::Plaquette { site: *site },
        })
    }

    pub fn apply(&self, op: &SiteOperator, psi: &TensorState) -> TensorState {
        match &op.action {
            SiteAction::Local { edges, cols } => self.apply_local(edges, cols, psi),
            SiteAction::Walk { sides, alpha } => self.apply_walk(sides, alpha, psi),
        }
    }

    fn apply_local(&self, edges: &[usize], cols: &EdgeMap, psi: &TensorState) -> TensorState {
        let n = self.n;
        let k = edges.len();
        let ldim = n.pow(k as u32);
        let off: Vec<usize> = (0..ldim)
            .map(|l| {
                let mut rem = l;
                let mut o = 0;
                for &e in edges {
                    o += (rem % n) * self.strides[e];
                    rem /= n;
                }
                o
            })
            .collect();
        let mut out = self.zero_state();
        for (idx, &a) in psi.amps.iter().enumerate() {
            if a == linalg::zero() {
                continue;
            }
            let mut l = 0;
            let mut mul = 1;
            for &e in edges {
                l += ((idx / self.strides[e]) % n) * mul;
                mul *= n;
            }
            let base = idx - off[l];
            for &(o, v) in &cols[l] {
                out.amps[base + off[o]] += v * a;
            }
        }
        out
    }

    fn apply_walk(&self, sides: &[(usize, bool)], alpha: &[C64], psi: &TensorState) -> TensorState {
        let g = self.g;
        let mut out = self.zero_state();
        for j in 0..g.cat.rank() {
            let nj = g.basis.pairs[j].len();
            let inv = C64::new(1.0 / g.sqrt_d(j), 0.0);
            for r0 in 0..nj {
                if (0..nj).all(|r| alpha[g.basis.from_block(j, r0, r)] == linalg::zero()) {
                    continue;
                }
                let table = |plus: bool| if plus { &self.tplus } else { &self.tminus };
                let (e0, p0) = sides[0];
                let mut phi: Vec<Option<Vec<C64>>> = (0..nj)
                    .map(|s| {
                        let y = g.basis.from_block(j, r0, s);
                        let map = &table(p0)[y];
                        if map.iter().all(|t| t.is_empty()) {
                            return None;
                        }
                        let mut v = vec![linalg::zero(); self.dim];
                        self.edge_map_acc(&psi.amps, e0, map, linalg::one(), &mut v);
                        Some(v)
                    })
                    .collect();
                for &(e, p) in &sides[1..] {
                    let mut next: Vec<Option<Vec<C64>>> = vec![None; nj];
                    for (s, slot) in next.iter_mut().enumerate() {
                        for (r, ph) in phi.iter().enumerate() {
                            let Some(ph) = ph else { continue };
                            let y = g.basis.from_block(j, r, s);
                            let map = &table(p)[y];
                            if map.iter().all(|t| t.is_empty()) {
                                continue;
                            }
                            let buf = slot.get_or_insert_with(|| vec![linalg::zero(); self.dim]);
                            self.edge_map_acc(ph, e, map, inv, buf);
                        }
                    }
                    phi = next;
                }
                for (r, ph) in phi.iter().enumerate() {
                    let c = alpha[g.basis.from_block(j, r0, r)];
                    if c == linalg::zero() {
                        continue;
                    }
                    if let Some(ph) = ph {
                        for (o, x) in out.amps.iter_mut().zip(ph) {
                            *o += c * x;
                        }
                    }
                }
            }
        }
        out
    }

    /// One corner per vertex, used as the default site for `A^K_v`.
    pub fn vertex_site(&self, v: usize) -> Site {
        let h = self.lat.vertex_half_edges(v)[0];
        Site { vertex: v, face: self.lat.corner_face(h), he: h }
    }

    /// Default site for `B^K_p`: the corner before the first side of the face.
    pub fn face_site(&self, f: usize) -> Site {
        let first = self.lat.face_sides(f)[0];
        let v = self.lat.vertex_of(first);
        let he = self.lat.vertex_half_edges(v).into_iter().find(|&x| self.lat.rot(x) == first).unwrap();
        Site { vertex: v, face: f, he }
    }

    pub fn vertex_stabilizer(&self, v: usize) -> SiteOperator {
        self.vertex_operator(&self.g.lambda_element(), &self.vertex_site(v)).unwrap()
    }

    pub fn face_stabilizer(&self, f: usize) -> SiteOperator {
        self.plaquette_operator(&self.g.dual_lambda(), &self.face_site(f)).unwrap()
    }

    /// `A^K_v` for every vertex followed by `B^K_p` for every face.
    pub fn stabilizers(&self) -> Vec<SiteOperator> {
        let mut v: Vec<SiteOperator> = (0..self.lat.num_vertices()).map(|v| self.vertex_stabilizer(v)).collect();
        v.extend((0..self.lat.num_faces()).map(|f| self.face_stabilizer(f)));
        v
    }

    pub fn apply_hamiltonian(&self, psi: &TensorState) -> Result<TensorState, Error> {
        if psi.len() != self.dim {
            return Err(Error::Invalid(format!("state has length {}, expected {}", psi.len(), self.dim)));
        }
        let mut out = self.zero_state();
        for op in self.stabilizers() {
            out.axpy(C64::new(-1.0, 0.0), &self.apply(&op, psi));
        }
        Ok(out)
    }

    /// `P = ∏_v A^K_v ∏_p B^K_p`.
    pub fn apply_projector(&self, psi: &TensorState) -> TensorState {
        let mut x = psi.clone();
        for f in (0..self.lat.num_faces()).rev() {
            x = self.apply(&self.face_stabilizer(f), &x);
        }
        for v in (0..self.lat.num_vertices()).rev() {
            x = self.apply(&self.vertex_stabilizer(v), &x);
        }
        x
    }

    fn apply_projector_with(&self, ops: &[SiteOperator], psi: &TensorState) -> TensorState {
        let mut x = psi.clone();
        for op in ops.iter().rev() {
            x = self.apply(op, &x);
        }
        x
    }
}

// ---------------------------------------------------------------------------
// L^K_0 basis

/// Basis state `|ℓ⟩_K` of `L^K_0` for an edge labeling.
#[derive(Clone, Debug)]
pub struct L0State {
    pub labels: Vec<usize>,
    /// Nonzero amplitudes as (full index, amplitude).
    pub amps: Vec<(usize, C64)>,
    pub admissible: bool,
}

impl L0State {
    pub fn to_dense(&self, dim: usize) -> TensorState {
        let mut s = TensorState::zeros(dim);
        for &(i, a) in &self.amps {
            s.amps[i] = a;
        }
        s
    }
}

struct VertexSector {
    /// (edge, is head) per end at the vertex, in vertex order
    ends: Vec<(usize, bool)>,
    /// image vector over local pair indices
    w: Vec<C64>,
}

impl<'a> KitaevModel<'a> {
    /// Image of `A^K_v` restricted to the sector of `labels`, on the pair
    /// indices owned by `v`. Returns `None` when the image is zero.
    fn vertex_sector(&self, v: usize, labels: &[usize]) -> Result<Option<VertexSector>, Error> {
        let g = self.g;
        let op = self.vertex_stabilizer(v);
        let SiteAction::Local { edges, cols } = &op.action else { unreachable!() };
        let site = self.vertex_site(v);
        let order = self.vertex_order(&site);
        let ends: Vec<(usize, bool)> = order.iter().map(|&h| (self.lat.edge_of(h), !self.lat.is_tail(h))).collect();
        let sizes: Vec<usize> = ends.iter().map(|&(e, _)| g.basis.pairs[labels[e]].len()).collect();
        let sdim: usize = sizes.iter().product();
        // basis index of an edge element whose v-owned pair is `p` (other pair fixed at 0)
        let elem = |e: usize, head: bool, p: usize| -> usize {
            let i = labels[e];
            if head {
                g.basis.from_block(i, p, 0)
            } else {
                g.basis.from_block(i, 0, p)
            }
        };
        let n = self.n;
        let local_of = |ps: &[usize]| -> usize {
            let mut l = 0;
            let mut mul = 1;
            for (f, &(e, head)) in ends.iter().enumerate() {
                l += elem(e, head, ps[f]) * mul;
                mul *= n;
            }
            l
        };
        let _ = edges;
        let split = |mut s: usize| -> Vec<usize> {
            sizes
                .iter()
                .map(|&m| {
                    let x = s % m;
                    s /= m;
                    x
                })
                .collect()
        };
        let mut mat = CMat::zeros(sdim, sdim);
        let mut back: HashMap<usize, usize> = HashMap::new();
        for s in 0..sdim {
            back.insert(local_of(&split(s)), s);
        }
        for s in 0..sdim {
            let l = local_of(&split(s));
            for &(o, val) in &cols[l] {
                match back.get(&o) {
                    Some(&t) => mat[(t, s)] += val,
                    None => return Err(Error::Invalid("vertex operator left its sector".into())),
                }
            }
        }
        let rk = linalg::rank(&mat, 1e-9);
        if linalg::max_abs(&mat) < 1e-12 || rk == 0 {
            return Ok(None);
        }
        if rk != 1 {
            return Err(Error::Invalid(format!("vertex {v}: sector image has rank {rk}")));
        }
        // column of largest norm spans the image
        let best = (0..sdim).max_by(|&a, &b| mat.column(a).norm().partial_cmp(&mat.column(b).norm()).unwrap()).unwrap();
        let mut w: Vec<C64> = mat.column(best).iter().copied().collect();
        // phase: positive at the first configuration carrying a unit corner label
        let pair_labels = |s: usize| -> Vec<usize> {
            let ps = split(s);
            let mut out = Vec::new();
            for (f, &(e, head)) in ends.iter().enumerate() {
                let (a, b) = g.basis.pairs[labels[e]][ps[f]];
                let _ = head;
                out.push(a);
                out.push(b);
            }
            out
        };
        let anchor = (0..sdim)
            .find(|&s| w[s].norm() > 1e-9 && pair_labels(s).contains(&0))
            .or_else(|| (0..sdim).find(|&s| w[s].norm() > 1e-9))
            .unwrap();
        let ph = w[anchor].conj() / w[anchor].norm();
        for x in w.iter_mut() {
            *x *= ph;
        }
        Ok(Some(VertexSector { ends, w }))
    }

    /// Number of labelings whose every vertex sector survives `A^K_v`.
    pub fn l0_dimension(&self) -> Result<usize, Error> {
        let r = self.g.cat.rank();
        let ne = self.lat.num_edges();
        let mut count = 0;
        for code in 0..r.pow(ne as u32) {
            let labels = crate::levin_wen::decode(code, r, ne);
            let mut ok = true;
            for v in 0..self.lat.num_vertices() {
                if self.vertex_sector(v, &labels)?.is_none() {
                    ok = false;
                    break;
                }
            }
            if ok {
                count += 1;
            }
        }
        Ok(count)
    }

    /// `|ℓ⟩_K`: product of the per-vertex images, unit norm.
    pub fn l0_basis_state(&self, labels: &[usize]) -> Result<L0State, Error> {
        let g = self.g;
        if labels.len() != self.lat.num_edges() || labels.iter().any(|&l| l >= g.cat.rank()) {
            return Err(Error::Invalid("labeling does not match the lattice".into()));
        }
        let mut sectors = Vec::new();
        for v in 0..self.lat.num_vertices() {
            match self.vertex_sector(v, labels)? {
                Some(s) => sectors.push(s),
                None => return Ok(L0State { labels: labels.to_vec(), amps: Vec::new(), admissible: false }),
            }
        }
        let ne = self.lat.num_edges();
        let sizes: Vec<usize> = labels.iter().map(|&i| g.basis.pairs[i].len()).collect();
        // enumerate (row, col) pairs per edge
        let total: usize = sizes.iter().map(|s| s * s).product();
        let mut amps = Vec::new();
        let mut norm = 0.0;
        for code in 0..total {
            let mut c = code;
            let mut rows = vec![0; ne];
            let mut colsx = vec![0; ne];
            for e in 0..ne {
                rows[e] = c % sizes[e];
                c /= sizes[e];
                colsx[e] = c % sizes[e];
                c /= sizes[e];
            }
            let mut amp = linalg::one();
            for sec in &sectors {
                let mut s = 0;
                let mut mul = 1;
                for &(e, head) in &sec.ends {
                    let p = if head { rows[e] } else { colsx[e] };
                    s += p * mul;
                    mul *= sizes[e];
                }
                amp *= sec.w[s];
                if amp == linalg::zero() {
                    break;
                }
            }
            if amp.norm() < 1e-15 {
                continue;
            }
            let keys: Vec<usize> = (0..ne).map(|e| g.basis.from_block(labels[e], rows[e], colsx[e])).collect();
            let w: f64 = keys.iter().map(|&k| self.weights[k]).product();
            norm += amp.norm_sqr() * w;
            amps.push((self.encode(&keys), amp));
        }
        let s = 1.0 / norm.sqrt();
        for a in amps.iter_mut() {
            a.1 *= s;
        }
        amps.sort_by_key(|a| a.0);
        Ok(L0State { labels: labels.to_vec(), amps, admissible: true })
    }

    /// Per-vertex amplitude table of `|ℓ⟩_K` in corner-label form, for
    /// comparison with closed formulas: returns, for vertex `v`, a map from
    /// the label pairs at its ends (vertex order) to the amplitude.
    pub fn l0_vertex_amplitudes(&self, v: usize, labels: &[usize]) -> Result<Vec<(Vec<(usize, usize)>, C64)>, Error> {
        let Some(sec) = self.vertex_sector(v, labels)? else {
            return Ok(Vec::new());
        };
        let sizes: Vec<usize> = sec.ends.iter().map(|&(e, _)| self.g.basis.pairs[labels[e]].len()).collect();
        let mut out = Vec::new();
        for (s, &w) in sec.w.iter().enumerate() {
            if w.norm() < 1e-12 {
                continue;
            }
            let mut c = s;
            let pairs = sec
                .ends
                .iter()
                .zip(&sizes)
                .map(|(&(e, _), &m)| {
                    let p = c % m;
                    c /= m;
                    self.g.basis.pairs[labels[e]][p]
                })
                .collect();
            out.push((pairs, w));
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// ground-space dimension

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GsdMethod {
    #[serde(rename = "exact-trace")]
    ExactTrace,
    #[serde(rename = "randomized-rank")]
    RandomizedRank,
}

impl std::str::FromStr for GsdMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "exact-trace" => Ok(Self::ExactTrace),
            "randomized-rank" => Ok(Self::RandomizedRank),
            _ => Err(Error::UnknownName(s.into())),
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GsdResult {
    pub gsd: usize,
    pub method: GsdMethod,
    /// exact-trace: the unrounded trace; randomized: probes used
    pub trace: Option<f64>,
    pub deviation: f64,
    pub probes: usize,
    pub singular_values: Vec<f64>,
    pub idempotency: Option<f64>,
    pub seed: u64,
}

pub fn ground_space_dimension(model: &KitaevModel, method: GsdMethod, seed: u64) -> Result<GsdResult, Error> {
    match method {
        GsdMethod::ExactTrace => exact_trace(model, seed),
        GsdMethod::RandomizedRank => randomized_rank(model, seed),
    }
}

/// `tr(∏A ∏B) = Σ_ℓ (ℓ, ∏B ℓ)` over the orthonormal `L^K_0` basis.
fn exact_trace(model: &KitaevModel, seed: u64) -> Result<GsdResult, Error> {
    if model.dim() > EXACT_LIMIT {
        return Err(Error::TooLarge(format!("exact trace needs dim ≤ {EXACT_LIMIT}, have {}", model.dim())));
    }
    let labelings = crate::levin_wen::admissible_labelings(&model.g.cat, model.lat);
    let faces: Vec<SiteOperator> = (0..model.lat.num_faces()).map(|f| model.face_stabilizer(f)).collect();
    let mut tr = 0.0;
    for l in &labelings {
        let st = model.l0_basis_state(l)?;
        if !st.admissible {
            continue;
        }
        let psi = st.to_dense(model.dim());
        let out = model.apply_projector_with(&faces, &psi);
        tr += model.inner(&psi, &out).re;
    }
    let gsd = tr.round().max(0.0) as usize;
    Ok(GsdResult {
        gsd,
        method: GsdMethod::ExactTrace,
        trace: Some(tr),
        deviation: (tr - tr.round()).abs(),
        probes: 0,
        singular_values: Vec::new(),
        idempotency: None,
        seed,
    })
}

fn randomized_rank(model: &KitaevModel, seed: u64) -> Result<GsdResult, Error> {
    model.check_dense()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images: Vec<TensorState> = Vec::new();
    let mut r = 8;
    let mut idem = None;
    for round in 0..4 {
        // probes are drawn sequentially so the result does not depend on the thread count
        let probes: Vec<TensorState> = (images.len()..r).map(|_| model.random_state(&mut rng)).collect();
        images.extend(probes.into_par_iter().map(|x| model.apply_projector(&x)).collect::<Vec<_>>());
        if idem.is_none() {
            let px = &images[0];
            let ppx = model.apply_projector(px);
            let mut d = ppx.clone();
            d.axpy(C64::new(-1.0, 0.0), px);
            idem = Some(d.norm() / px.norm().max(1e-300));
        }
        let gram = CMat::from_fn(r, r, |a, b| images[a].dot(&images[b]));
        let sv = linalg::singular_values(&gram);
        let rank = linalg::rank(&gram, 1e-6);
        // singular values of the Gram matrix are squares of those of the images
        let sv_img: Vec<f64> = sv.iter().map(|s| s.sqrt()).collect();
        if rank < r {
            let id = idem.unwrap();
            if id >= 1e-8 {
                return Err(Error::Unstable(format!("projector idempotency probe {id:.2e}")));
            }
            return Ok(GsdResult {
                gsd: rank,
                method: GsdMethod::RandomizedRank,
                trace: None,
                deviation: 0.0,
                probes: r,
                singular_values: sv_img,
                idempotency: idem,
                seed,
            });
        }
        if round == 3 {
            break;
        }
        r *= 2;
    }
    Err(Error::Unstable(format!("rank equalled {r} probes after 3 doublings")))
}

// ---------------------------------------------------------------------------
// verification

fn random_states(model: &KitaevModel, k: usize, seed: u64) -> Vec<TensorState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| model.random_state(&mut rng)).collect()
}

fn rel_diff(a: &TensorState, b: &TensorState) -> f64 {
    let mut d = a.clone();
    d.axpy(C64::new(-1.0, 0.0), b);
    d.norm() / a.norm().max(b.norm()).max(1e-300)
}

/// Stabilizer checks on random probes: Hermitian (state product),
/// idempotent, pairwise commuting, independent of the chosen site.
pub fn verify_stabilizers(model: &KitaevModel, tol: f64, seed: u64) -> Result<VerificationReport, Error> {
    model.check_dense()?;
    let mut rep = VerificationReport::new(format!("stabilizers:{}:{}", model.g.cat.name, model.lat.name));
    let probes = random_states(model, 2, seed);
    let ops = model.stabilizers();
    let nv = model.lat.num_vertices();
    let imgs: Vec<Vec<TensorState>> = ops.iter().map(|op| probes.iter().map(|x| model.apply(op, x)).collect()).collect();
    let (mut idem_a, mut idem_b, mut herm_a, mut herm_b, mut comm) = (0f64, 0f64, 0f64, 0f64, 0f64);
    let (mut chi_a, mut chi_b) = (0f64, 0f64);
    for (k, op) in ops.iter().enumerate() {
        for (p, x) in probes.iter().enumerate() {
            let ox = &imgs[k][p];
            let oox = model.apply(op, ox);
            let d = rel_diff(&oox, ox);
            // Hermitian: (y, O x) = (O y, x)
            let y = &probes[1 - p];
            let oy = &imgs[k][1 - p];
            let lhs = model.inner(y, ox);
            let rhs = model.inner(oy, x);
            let h = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300);
            let lc = model.chi_inner(y, ox);
            let rc = model.chi_inner(oy, x);
            let hc = (lc - rc).norm() / lc.norm().max(rc.norm()).max(1e-300);
            if k < nv {
                idem_a = idem_a.max(d);
                herm_a = herm_a.max(h);
                chi_a = chi_a.max(hc);
            } else {
                idem_b = idem_b.max(d);
                herm_b = herm_b.max(h);
                chi_b = chi_b.max(hc);
            }
        }
        for (l, op2) in ops.iter().enumerate().skip(k + 1) {
            for (p, _) in probes.iter().enumerate() {
                let ab = model.apply(op, &imgs[l][p]);
                let ba = model.apply(op2, &imgs[k][p]);
                comm = comm.max(rel_diff(&ab, &ba));
            }
        }
    }
    rep.residual("A^K_v idempotent", idem_a, tol);
    rep.residual("B^K_p idempotent", idem_b, tol);
    rep.residual("A^K_v Hermitian", herm_a, tol);
    rep.residual("B^K_p Hermitian", herm_b, tol);
    rep.info("A^K_v Hermitian in the χ product", chi_a, None);
    rep.info("B^K_p Hermitian in the χ product", chi_b, None);
    rep.residual("stabilizers pairwise commute", comm, tol);

    // site independence
    let x = &probes[0];
    let lam = model.g.lambda_element();
    let mut vind = 0f64;
    for v in 0..nv {
        let base = model.apply(&model.vertex_stabilizer(v), x);
        for h in model.lat.vertex_half_edges(v) {
            let site = Site { vertex: v, face: model.lat.corner_face(h), he: h };
            let other = model.apply(&model.vertex_operator(&lam, &site)?, x);
            vind = vind.max(rel_diff(&base, &other));
        }
    }
    rep.residual("A^K_v independent of adjacent face", vind, tol);
    let lamd = model.g.dual_lambda();
    let mut find = 0f64;
    for f in 0..model.lat.num_faces() {
        let base = model.apply(&model.face_stabilizer(f), x);
        for &side in model.lat.face_sides(f) {
            let v = model.lat.vertex_of(side);
            let he = model.lat.vertex_half_edges(v).into_iter().find(|&h| model.lat.rot(h) == side).unwrap();
            let other = model.apply(&model.plaquette_operator(&lamd, &Site { vertex: v, face: f, he })?, x);
            find = find.max(rel_diff(&base, &other));
        }
    }
    rep.residual("B^K_p independent of base site", find, tol);

    // B^K_p = Σ_μ (d_μ/D²) B^μ_p
    let dd = model.g.cat.total_dim_sq();
    let mut dec = 0f64;
    for f in 0..model.lat.num_faces() {
        let site = model.face_site(f);
        let full = model.apply(&model.face_stabilizer(f), x);
        let mut sum = model.zero_state();
        for mu in 0..model.g.cat.rank() {
            let op = model.plaquette_operator(&model.g.dual_lambda_mu(mu)?, &site)?;
            sum.axpy(C64::new(model.g.d(mu) / dd, 0.0), &model.apply(&op, x));
        }
        dec = dec.max(rel_diff(&full, &sum));
    }
    rep.residual("B^K_p = Σ_μ (d_μ/D²) B^μ_p", dec, tol);
    Ok(rep)
}

/// Dense operator matrix by applying to every basis vector (small models only).
pub fn dense_matrix(model: &KitaevModel, op: &dyn Fn(&TensorState) -> TensorState) -> Result<CMat, Error> {
    if model.dim() > 5000 {
        return Err(Error::TooLarge(format!("dense matrix of dimension {}", model.dim())));
    }
    let n = model.dim();
    let mut m = CMat::zeros(n, n);
    for c in 0..n {
        let mut e = model.zero_state();
        e.amps[c] = linalg::one();
        let out = op(&e);
        for (r, v) in out.amps.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    Ok(m)
}

/// Spectrum of `H^K` made Hermitian by the state metric, ascending.
pub fn hamiltonian_spectrum(model: &KitaevModel) -> Result<Vec<f64>, Error> {
    let h = dense_matrix(model, &|x| model.apply_hamiltonian(x).unwrap())?;
    let w: Vec<f64> = (0..model.dim()).map(|i| model.weight(i).sqrt()).collect();
    let hs = CMat::from_fn(model.dim(), model.dim(), |r, c| h[(r, c)] * (w[r] / w[c]));
    Ok(linalg::hermitian_eigenvalues(&hs))
}

// ---------------------------------------------------------------------------
// the bigon site: two edges, x1 pointing into v, x2 pointing out of v, both
// with the face on their left; counterclockwise from v the face walk meets x2
// first

pub struct BigonSite<'a> {
    pub g: &'a Groupoid,
}

impl<'a> BigonSite<'a> {
    fn l(&self, k: usize, plus: bool) -> CMat {
        let n = self.g.dim();
        let mut m = CMat::zeros(n, n);
        for a in 0..n {
            let r = if plus {
                self.g.basis_mul(k, a).map(|(z, c)| (z, C64::new(c, 0.0)))
            } else {
                let (sk, s) = self.g.antipode_basis(k);
                self.g.basis_mul(a, sk).map(|(z, c)| (z, s * c))
            };
            if let Some((z, v)) = r {
                m[(z, a)] += v;
            }
        }
        m
    }

    /// `T^{ê_y}_-` on one edge.
    fn t_minus(&self, y: usize) -> CMat {
        let n = self.g.dim();
        let mut m = CMat::zeros(n, n);
        for a in 0..n {
            for &(p, q, v) in self.g.delta_basis(a) {
                let (t, s) = self.g.antipode_inv_basis(p);
                if t == y {
                    m[(q, a)] += v * s;
                }
            }
        }
        m
    }

    pub fn a(&self, h: &GroupoidElement) -> CMat {
        let n = self.g.dim();
        let mut m = CMat::zeros(n * n, n * n);
        let t = self.g.comultiply(h, crate::groupoid::CoproductMode::FSymbol);
        for (key, &c) in &t.terms {
            // edge x1 is the first (more significant) factor
            m += self.l(key[0], true).kronecker(&self.l(key[1], false)) * c;
        }
        m
    }

    pub fn b(&self, alpha: &DualElement) -> CMat {
        let n = self.g.dim();
        let mut m = CMat::zeros(n * n, n * n);
        for y1 in 0..n {
            for y2 in 0..n {
                if let Some((z, c)) = self.g.basis_mul(y2, y1) {
                    let coef = alpha.coeffs[z] * c;
                    if coef != linalg::zero() {
                        m += self.t_minus(y1).kronecker(&self.t_minus(y2)) * coef;
                    }
                }
            }
        }
        m
    }
}

/// Iterated coproduct of a basis functional in the convention used by the
/// face operators, `⟨Δ̂²α, a ⊗ b ⊗ c⟩ = ⟨α, c b a⟩`: returns
/// `ê_m ↦ Σ c ê_r ⊗ ê_q ⊗ ê_p` with `c` the coefficient of `e_m` in `e_p e_q e_r`.
fn dual_coproduct_twice(g: &Groupoid, m: usize) -> Vec<([usize; 3], C64)> {
    let n = g.dim();
    let mut out = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let Some((pq, c1)) = g.basis_mul(p, q) else { continue };
            for r in 0..n {
                if let Some((z, c2)) = g.basis_mul(pq, r) {
                    if z == m {
                        out.push(([r, q, p], C64::new(c1 * c2, 0.0)));
                    }
                }
            }
        }
    }
    out
}

/// Site relations on the bigon lattice: the exchange relation, the two
/// relations for `H_t` and `H_s`, and `B_λ A_Λ = A_Λ B_λ`.
pub fn verify_site_algebra(g: &Groupoid, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("site-algebra:{}", g.cat.name));
    let site = BigonSite { g };
    let n = g.dim();
    let amat: Vec<CMat> = (0..n).map(|k| site.a(&g.basis_element(k))).collect();
    let bmat: Vec<CMat> = (0..n).map(|k| site.b(&g.dual_basis_element(k))).collect();
    let prod: Vec<Vec<CMat>> = (0..n).map(|m| (0..n).map(|k| &bmat[m] * &amat[k]).collect()).collect();
    let mut exch = 0f64;
    for k in 0..n {
        let h3 = g.comultiply_twice(&g.basis_element(k));
        for m in 0..n {
            let lhs = &amat[k] * &bmat[m];
            let mut rhs = CMat::zeros(n * n, n * n);
            for ([p, q, r], ca) in dual_coproduct_twice(g, m) {
                for (key, &ch) in &h3.terms {
                    if key[0] != p {
                        continue;
                    }
                    // ⟨ê_r, S^{-1}(e_{k3})⟩
                    let (t, s) = g.antipode_inv_basis(key[2]);
                    if t != r {
                        continue;
                    }
                    rhs += &prod[q][key[1]] * (ca * ch * s);
                }
            }
            exch = exch.max(linalg::max_abs(&(lhs - rhs)));
        }
    }
    rep.residual("A_h B_α exchange relation", exch, tol);

    // H_t and H_s relations, on a basis of each counital subalgebra
    let eps = g.counit_dual();
    let ht = independent(g, (0..n).map(|k| g.counital(&g.basis_element(k), crate::groupoid::Side::Target)).collect());
    let hs = independent(g, (0..n).map(|k| g.counital(&g.basis_element(k), crate::groupoid::Side::Source)).collect());
    let lin_a = |h: &GroupoidElement| -> CMat {
        let mut m = CMat::zeros(n * n, n * n);
        for (k, &c) in h.coeffs.iter().enumerate() {
            if c != linalg::zero() {
                m += &amat[k] * c;
            }
        }
        m
    };
    let lin_b = |a: &DualElement| -> CMat {
        let mut m = CMat::zeros(n * n, n * n);
        for (k, &c) in a.coeffs.iter().enumerate() {
            if c != linalg::zero() {
                m += &bmat[k] * c;
            }
        }
        m
    };
    // (z ⇀ ε)(x) = ε(x z), (ε ↼ w)(x) = ε(w x)
    let zeps: Vec<DualElement> = ht
        .iter()
        .map(|z| g.dual_element((0..n).map(|x| g.pairing(&eps, &g.multiply(&g.basis_element(x), z).unwrap())).collect()))
        .collect();
    let epsw: Vec<DualElement> = hs
        .iter()
        .map(|w| g.dual_element((0..n).map(|x| g.pairing(&eps, &g.multiply(w, &g.basis_element(x)).unwrap())).collect()))
        .collect();
    let mut rel_t = 0f64;
    let mut rel_s = 0f64;
    for k in 0..n {
        let h = g.basis_element(k);
        for m in 0..n {
            let alpha = g.dual_basis_element(m);
            for (z, ze) in ht.iter().zip(&zeps) {
                let l1 = lin_b(&g.convolution(&alpha, ze)) * &amat[k];
                let r1 = &bmat[m] * lin_a(&g.multiply(z, &h).unwrap());
                rel_t = rel_t.max(linalg::max_abs(&(l1 - r1)));
            }
            for (w, we) in hs.iter().zip(&epsw) {
                let l2 = lin_b(&g.convolution(&alpha, we)) * &amat[k];
                let r2 = &bmat[m] * lin_a(&g.multiply(w, &h).unwrap());
                rel_s = rel_s.max(linalg::max_abs(&(l2 - r2)));
            }
        }
    }
    rep.residual("B_{α(z⇀ε)} A_h = B_α A_{zh}, z ∈ H_t", rel_t, tol);
    rep.residual("B_{α(ε↼w)} A_h = B_α A_{wh}, w ∈ H_s", rel_s, tol);
    let al = site.a(&g.lambda_element());
    let bl = site.b(&g.dual_lambda());
    rep.residual("B_λ A_Λ = A_Λ B_λ", linalg::max_abs(&(&bl * &al - &al * &bl)), tol);
    rep
}

/// Greedy linearly independent subset.
fn independent(g: &Groupoid, xs: Vec<GroupoidElement>) -> Vec<GroupoidElement> {
    let n = g.dim();
    let mut out: Vec<GroupoidElement> = Vec::new();
    for x in xs {
        let mut cand = out.clone();
        cand.push(x.clone());
        let m = CMat::from_fn(n, cand.len(), |r, c| cand[c].coeffs[r]);
        if linalg::rank(&m, 1e-10) == cand.len() {
            out.push(x);
        }
    }
    out
}

/// Conjugating one edge factor by `S` maps the stabilizers of the lattice to
/// those of the lattice with that edge reversed. Returns the worst relative
/// residual over all stabilizers on random probes.
pub fn orientation_equivariance_residual(model: &KitaevModel, rev: &KitaevModel, e: usize, seed: u64) -> Result<f64, Error> {
    model.check_dense()?;
    let g = model.g;
    let n = g.dim();
    let s_map: EdgeMap = (0..n).map(|k| vec![g.antipode_basis(k)]).collect();
    let mut worst = 0f64;
    for x in random_states(model, 1, seed) {
        let ux = model.apply_edge(e, &s_map, &x);
        for (op, op2) in model.stabilizers().iter().zip(rev.stabilizers().iter()) {
            let lhs = model.apply_edge(e, &s_map, &model.apply(op, &x));
            let rhs = rev.apply(op2, &ux);
            worst = worst.max(rel_diff(&lhs, &rhs));
        }
    }
    Ok(worst)
}
