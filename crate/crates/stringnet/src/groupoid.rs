//! The quantum groupoid `H_C` with basis `e^{ab}_{i;cd}`.
//!
//! Basis vectors are grouped by the middle label `i`. Within block `i` the
//! element `e^{ab}_{i;cd}` sits at row `(a,b)` and column `(c,d)` of the pair
//! list of `V_i`, and `√d_i · e^{ab}_{i;cd}` are matrix units.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::fusion_data::{verify_category, FusionCategory};
use crate::report::VerificationReport;
use crate::{Error, C64};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Coefficients below this magnitude are dropped after every operation.
pub const DROP: f64 = 1e-14;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel {
    pub a: usize,
    pub b: usize,
    pub i: usize,
    pub c: usize,
    pub d: usize,
}

#[derive(Clone, Debug)]
pub struct GroupoidBasis {
    pub elems: Vec<BasisLabel>,
    index: HashMap<BasisLabel, usize>,
    /// `pairs[i]` lists `(a,b)` with `(a,i,b)` admissible.
    pub pairs: Vec<Vec<(usize, usize)>>,
    pub block_offset: Vec<usize>,
}

impl GroupoidBasis {
    fn new(cat: &FusionCategory) -> Self {
        let r = cat.rank();
        let mut pairs = vec![Vec::new(); r];
        for (i, p) in pairs.iter_mut().enumerate() {
            for a in 0..r {
                for b in 0..r {
                    if cat.adm(a, i, b) {
                        p.push((a, b));
                    }
                }
            }
        }
        let mut elems = Vec::new();
        let mut block_offset = Vec::new();
        for (i, p) in pairs.iter().enumerate() {
            block_offset.push(elems.len());
            for &(a, b) in p {
                for &(c, d) in p {
                    elems.push(BasisLabel { a, b, i, c, d });
                }
            }
        }
        let index = elems.iter().enumerate().map(|(k, &l)| (l, k)).collect();
        Self { elems, index, pairs, block_offset }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn index_of(&self, a: usize, b: usize, i: usize, c: usize, d: usize) -> Option<usize> {
        self.index.get(&BasisLabel { a, b, i, c, d }).copied()
    }

    /// Block label, row and column of basis index `k`.
    #[inline]
    pub fn block_coords(&self, k: usize) -> (usize, usize, usize) {
        let i = self.elems[k].i;
        let n = self.pairs[i].len();
        let off = k - self.block_offset[i];
        (i, off / n, off % n)
    }

    #[inline]
    pub fn from_block(&self, i: usize, r: usize, s: usize) -> usize {
        self.block_offset[i] + r * self.pairs[i].len() + s
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupoidElement {
    gid: u64,
    pub coeffs: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualElement {
    gid: u64,
    pub coeffs: Vec<C64>,
}

/// Element of `H^{⊗k}` as a sparse map from basis-index tuples.
#[derive(Clone, Debug)]
pub struct TensorElement {
    gid: u64,
    pub factors: usize,
    pub terms: HashMap<Vec<usize>, C64>,
}

impl TensorElement {
    fn new(gid: u64, factors: usize) -> Self {
        Self { gid, factors, terms: HashMap::new() }
    }

    fn add(&mut self, key: Vec<usize>, v: C64) {
        *self.terms.entry(key).or_insert(ZERO) += v;
    }

    fn pruned(mut self) -> Self {
        self.terms.retain(|_, v| v.norm() > DROP);
        self
    }

    pub fn coefficient(&self, key: &[usize]) -> C64 {
        self.terms.get(key).copied().unwrap_or(ZERO)
    }

    /// Largest coefficient difference.
    pub fn max_diff(&self, other: &TensorElement) -> f64 {
        let mut m = 0f64;
        for (k, v) in &self.terms {
            m = m.max((v - other.coefficient(k)).norm());
        }
        for (k, v) in &other.terms {
            if !self.terms.contains_key(k) {
                m = m.max(v.norm());
            }
        }
        m
    }

    pub fn gid(&self) -> u64 {
        self.gid
    }

    pub fn nnz(&self) -> usize {
        self.terms.values().filter(|v| v.norm() > DROP).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoproductMode {
    GSymbol,
    FSymbol,
}

impl std::str::FromStr for CoproductMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "g-symbol" => Ok(Self::GSymbol),
            "f-symbol" => Ok(Self::FSymbol),
            _ => Err(Error::UnknownName(s.into())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Target,
    Source,
}

pub type Terms2 = Vec<(usize, usize, C64)>;

#[derive(Clone, Debug)]
pub struct Groupoid {
    pub cat: FusionCategory,
    pub basis: GroupoidBasis,
    id: u64,
    sqrt_d: Vec<f64>,
    coprod_f: Vec<Terms2>,
    coprod_g: Vec<Terms2>,
    antipode: Vec<(usize, C64)>,
    antipode_inv: Vec<(usize, C64)>,
    eta: Vec<C64>,
}

fn prune(mut v: Vec<C64>) -> Vec<C64> {
    for x in v.iter_mut() {
        if x.norm() <= DROP {
            *x = ZERO;
        }
    }
    v
}

/// Build `H_C`; the category must pass `verify_category` at `1e-9`.
pub fn build_groupoid(cat: &FusionCategory) -> Result<Groupoid, Error> {
    let rep = verify_category(cat, 1e-9);
    if !rep.passed() {
        let failed: Vec<String> = rep.checks.iter().filter(|c| c.gating && !c.pass).map(|c| c.name.clone()).collect();
        return Err(Error::NotVerified(failed.join(", ")));
    }
    Ok(Groupoid::build_unchecked(cat))
}

impl Groupoid {
    /// Build without verifying the category first.
    pub fn build_unchecked(cat: &FusionCategory) -> Self {
        let basis = GroupoidBasis::new(cat);
        let sqrt_d: Vec<f64> = cat.qdims().iter().map(|d| d.sqrt()).collect();
        let mut g = Groupoid {
            cat: cat.clone(),
            basis,
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            sqrt_d,
            coprod_f: Vec::new(),
            coprod_g: Vec::new(),
            antipode: Vec::new(),
            antipode_inv: Vec::new(),
            eta: Vec::new(),
        };
        g.coprod_f = (0..g.dim()).map(|k| g.coproduct_terms(k, CoproductMode::FSymbol)).collect();
        g.coprod_g = (0..g.dim()).map(|k| g.coproduct_terms(k, CoproductMode::GSymbol)).collect();
        g.antipode = (0..g.dim())
            .map(|k| {
                let BasisLabel { a, b, i, c, d } = g.basis.elems[k];
                let s = g.sqrt_d[b] * g.sqrt_d[c] / (g.sqrt_d[a] * g.sqrt_d[d]);
                (g.basis.index_of(d, c, i, b, a).unwrap(), C64::new(s, 0.0))
            })
            .collect();
        g.antipode_inv = vec![(0, ZERO); g.dim()];
        for k in 0..g.dim() {
            let (t, s) = g.antipode[k];
            g.antipode_inv[t] = (k, s.inv());
        }
        let mut eta = vec![ZERO; g.dim()];
        for (k, e) in g.basis.elems.iter().enumerate() {
            if e.a == e.c && e.b == e.d {
                eta[k] = C64::new(g.sqrt_d[e.i], 0.0);
            }
        }
        g.eta = eta;
        g
    }

    /// Replace the antipode by zero. Used to confirm the checks can fail.
    pub fn sabotage_zero_antipode(&mut self) {
        for t in self.antipode.iter_mut() {
            t.1 = ZERO;
        }
    }

    /// Replace the antipode and its inverse by the identity map.
    pub fn sabotage_identity_antipode(&mut self) {
        for k in 0..self.antipode.len() {
            self.antipode[k] = (k, C64::new(1.0, 0.0));
            self.antipode_inv[k] = (k, C64::new(1.0, 0.0));
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn d(&self, a: usize) -> f64 {
        self.cat.qdim(a)
    }

    pub fn sqrt_d(&self, a: usize) -> f64 {
        self.sqrt_d[a]
    }

    fn coproduct_terms(&self, k: usize, mode: CoproductMode) -> Terms2 {
        let cat = &self.cat;
        let r = cat.rank();
        let BasisLabel { a, b, i, c, d } = self.basis.elems[k];
        let sd = |x: usize| self.sqrt_d[x];
        let mut out = Vec::new();
        for j in 0..r {
            for kk in 0..r {
                if !cat.adm(j, kk, i) {
                    continue;
                }
                for p in 0..r {
                    for q in 0..r {
                        let (Some(x), Some(y)) =
                            (self.basis.index_of(a, p, j, c, q), self.basis.index_of(p, b, kk, q, d))
                        else {
                            continue;
                        };
                        let v = match mode {
                            CoproductMode::FSymbol => {
                                cat.f(a, j, kk, b, i, p) * cat.f(d, kk, j, c, i, q) * (sd(j) * sd(kk) / sd(i))
                            }
                            CoproductMode::GSymbol => {
                                cat.g(i, kk, j, p, a, b) * cat.g(i, j, kk, q, d, c) * (sd(i) * sd(j) * sd(kk)
                                    / (sd(a) * sd(b) * sd(c) * sd(d)))
                            }
                        };
                        if v.norm() > DROP {
                            out.push((x, y, v));
                        }
                    }
                }
            }
        }
        out
    }

    // ---- element constructors ----

    pub fn element(&self, coeffs: Vec<C64>) -> GroupoidElement {
        assert_eq!(coeffs.len(), self.dim());
        GroupoidElement { gid: self.id, coeffs: prune(coeffs) }
    }

    pub fn dual_element(&self, coeffs: Vec<C64>) -> DualElement {
        assert_eq!(coeffs.len(), self.dim());
        DualElement { gid: self.id, coeffs: prune(coeffs) }
    }

    pub fn zero(&self) -> GroupoidElement {
        self.element(vec![ZERO; self.dim()])
    }

    pub fn basis_element(&self, k: usize) -> GroupoidElement {
        let mut v = vec![ZERO; self.dim()];
        v[k] = C64::new(1.0, 0.0);
        self.element(v)
    }

    /// `e^{ab}_{i;cd}`, if admissible.
    pub fn e(&self, a: usize, b: usize, i: usize, c: usize, d: usize) -> Option<GroupoidElement> {
        self.basis.index_of(a, b, i, c, d).map(|k| self.basis_element(k))
    }

    pub fn dual_basis_element(&self, k: usize) -> DualElement {
        let mut v = vec![ZERO; self.dim()];
        v[k] = C64::new(1.0, 0.0);
        self.dual_element(v)
    }

    pub fn tensor(&self, factors: usize) -> TensorElement {
        TensorElement::new(self.id, factors)
    }

    // ---- algebra ----

    /// Product of two basis vectors: index and scalar.
    #[inline]
    pub fn basis_mul(&self, x: usize, y: usize) -> Option<(usize, f64)> {
        let (i, r, s) = self.basis.block_coords(x);
        let (i2, r2, s2) = self.basis.block_coords(y);
        if i != i2 || s != r2 {
            return None;
        }
        Some((self.basis.from_block(i, r, s2), 1.0 / self.sqrt_d[i]))
    }

    pub(crate) fn mul_raw(&self, x: &[C64], y: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim()];
        for (k, &xv) in x.iter().enumerate() {
            if xv == ZERO {
                continue;
            }
            let (i, r, s) = self.basis.block_coords(k);
            let n = self.basis.pairs[i].len();
            let scale = xv / self.sqrt_d[i];
            for t in 0..n {
                let yv = y[self.basis.from_block(i, s, t)];
                if yv != ZERO {
                    out[self.basis.from_block(i, r, t)] += scale * yv;
                }
            }
        }
        prune(out)
    }

    fn same(&self, gid: u64) -> Result<(), Error> {
        if gid == self.id {
            Ok(())
        } else {
            Err(Error::Provenance)
        }
    }

    pub fn multiply(&self, x: &GroupoidElement, y: &GroupoidElement) -> Result<GroupoidElement, Error> {
        self.same(x.gid)?;
        self.same(y.gid)?;
        Ok(self.element(self.mul_raw(&x.coeffs, &y.coeffs)))
    }

    pub fn unit(&self) -> GroupoidElement {
        self.element(self.eta.clone())
    }

    pub fn coproduct_table(&self, mode: CoproductMode) -> &[Terms2] {
        match mode {
            CoproductMode::FSymbol => &self.coprod_f,
            CoproductMode::GSymbol => &self.coprod_g,
        }
    }

    /// Default coproduct terms of a basis vector (F-symbol form).
    #[inline]
    pub fn delta_basis(&self, k: usize) -> &Terms2 {
        &self.coprod_f[k]
    }

    pub fn comultiply(&self, x: &GroupoidElement, mode: CoproductMode) -> TensorElement {
        let table = self.coproduct_table(mode);
        let mut t = self.tensor(2);
        for (k, &xv) in x.coeffs.iter().enumerate() {
            if xv == ZERO {
                continue;
            }
            for &(p, q, v) in &table[k] {
                t.add(vec![p, q], xv * v);
            }
        }
        t.pruned()
    }

    /// `(Δ ⊗ id) Δ (x)`.
    pub fn comultiply_twice(&self, x: &GroupoidElement) -> TensorElement {
        let d1 = self.comultiply(x, CoproductMode::FSymbol);
        self.delta_on_factor(&d1, 0)
    }

    /// Apply `Δ` to one tensor factor.
    pub fn delta_on_factor(&self, t: &TensorElement, slot: usize) -> TensorElement {
        let mut out = self.tensor(t.factors + 1);
        for (key, &v) in &t.terms {
            for &(p, q, w) in &self.coprod_f[key[slot]] {
                let mut k2 = Vec::with_capacity(key.len() + 1);
                k2.extend_from_slice(&key[..slot]);
                k2.push(p);
                k2.push(q);
                k2.extend_from_slice(&key[slot + 1..]);
                out.add(k2, v * w);
            }
        }
        out.pruned()
    }

    pub fn tensor_mul(&self, x: &TensorElement, y: &TensorElement) -> TensorElement {
        assert_eq!(x.factors, y.factors);
        let mut out = self.tensor(x.factors);
        for (kx, &vx) in &x.terms {
            'outer: for (ky, &vy) in &y.terms {
                let mut key = Vec::with_capacity(x.factors);
                let mut s = vx * vy;
                for f in 0..x.factors {
                    match self.basis_mul(kx[f], ky[f]) {
                        Some((z, c)) => {
                            key.push(z);
                            s *= c;
                        }
                        None => continue 'outer,
                    }
                }
                out.add(key, s);
            }
        }
        out.pruned()
    }

    /// `x_1 ⊗ … ⊗ x_k` for single elements.
    pub fn tensor_of(&self, parts: &[&GroupoidElement]) -> TensorElement {
        let mut t = self.tensor(1);
        t.terms.insert(vec![], C64::new(1.0, 0.0));
        t.factors = 0;
        for p in parts {
            let mut next = self.tensor(t.factors + 1);
            for (key, &v) in &t.terms {
                for (k, &c) in p.coeffs.iter().enumerate() {
                    if c != ZERO {
                        let mut k2 = key.clone();
                        k2.push(k);
                        next.add(k2, v * c);
                    }
                }
            }
            t = next;
        }
        t.pruned()
    }

    /// `Σ x_(2) ⊗ x_(1)`.
    pub fn flip(&self, t: &TensorElement) -> TensorElement {
        let mut out = self.tensor(2);
        for (k, &v) in &t.terms {
            out.add(vec![k[1], k[0]], v);
        }
        out
    }

    pub fn counit_basis(&self, k: usize) -> f64 {
        let e = self.basis.elems[k];
        if e.a == e.b && e.c == e.d && e.i == 0 {
            1.0
        } else {
            0.0
        }
    }

    pub fn counit(&self, x: &GroupoidElement) -> C64 {
        x.coeffs.iter().enumerate().map(|(k, &v)| v * self.counit_basis(k)).sum()
    }

    pub(crate) fn counit_raw(&self, x: &[C64]) -> C64 {
        x.iter().enumerate().map(|(k, &v)| v * self.counit_basis(k)).sum()
    }

    #[inline]
    pub fn antipode_basis(&self, k: usize) -> (usize, C64) {
        self.antipode[k]
    }

    #[inline]
    pub fn antipode_inv_basis(&self, k: usize) -> (usize, C64) {
        self.antipode_inv[k]
    }

    pub fn antipode(&self, x: &GroupoidElement) -> GroupoidElement {
        let mut out = vec![ZERO; self.dim()];
        for (k, &v) in x.coeffs.iter().enumerate() {
            let (t, s) = self.antipode[k];
            out[t] += v * s;
        }
        self.element(out)
    }

    pub fn antipode_inv(&self, x: &GroupoidElement) -> GroupoidElement {
        let mut out = vec![ZERO; self.dim()];
        for (k, &v) in x.coeffs.iter().enumerate() {
            let (t, s) = self.antipode_inv[k];
            out[t] += v * s;
        }
        self.element(out)
    }

    /// Index of `(e_k)^*`.
    #[inline]
    pub fn star_basis(&self, k: usize) -> usize {
        let (i, r, s) = self.basis.block_coords(k);
        self.basis.from_block(i, s, r)
    }

    pub fn star(&self, x: &GroupoidElement) -> GroupoidElement {
        let mut out = vec![ZERO; self.dim()];
        for (k, &v) in x.coeffs.iter().enumerate() {
            out[self.star_basis(k)] += v.conj();
        }
        self.element(out)
    }

    pub fn tensor_star(&self, t: &TensorElement) -> TensorElement {
        let mut out = self.tensor(t.factors);
        for (k, &v) in &t.terms {
            out.add(k.iter().map(|&x| self.star_basis(x)).collect(), v.conj());
        }
        out
    }

    /// `ε_t(h) = ε(η_(1) h) η_(2)` or `ε_s(h) = η_(1) ε(h η_(2))`.
    pub fn counital(&self, x: &GroupoidElement, side: Side) -> GroupoidElement {
        let de = self.comultiply(&self.unit(), CoproductMode::FSymbol);
        let mut out = vec![ZERO; self.dim()];
        for (key, &v) in &de.terms {
            let (p, q) = (key[0], key[1]);
            match side {
                Side::Target => {
                    let prod = self.mul_raw(&self.basis_element(p).coeffs, &x.coeffs);
                    let e = self.counit_raw(&prod);
                    if e != ZERO {
                        out[q] += v * e;
                    }
                }
                Side::Source => {
                    let prod = self.mul_raw(&x.coeffs, &self.basis_element(q).coeffs);
                    let e = self.counit_raw(&prod);
                    if e != ZERO {
                        out[p] += v * e;
                    }
                }
            }
        }
        self.element(out)
    }

    // ---- dual ----

    pub fn pairing(&self, phi: &DualElement, x: &GroupoidElement) -> C64 {
        phi.coeffs.iter().zip(&x.coeffs).map(|(a, b)| a * b).sum()
    }

    #[inline]
    pub fn eval(&self, phi: &DualElement, k: usize) -> C64 {
        phi.coeffs[k]
    }

    /// `⟨φψ, h⟩ = ⟨φ ⊗ ψ, Δh⟩`.
    pub fn convolution(&self, phi: &DualElement, psi: &DualElement) -> DualElement {
        let out = (0..self.dim())
            .map(|k| self.coprod_f[k].iter().map(|&(p, q, v)| v * phi.coeffs[p] * psi.coeffs[q]).sum())
            .collect();
        self.dual_element(out)
    }

    /// `⟨φ*, h⟩ = conj⟨φ, S(h)*⟩`.
    pub fn dual_star(&self, phi: &DualElement) -> DualElement {
        let out = (0..self.dim())
            .map(|k| {
                let (t, s) = self.antipode[k];
                // S(e_k)* = conj(s) e_{t*}
                (phi.coeffs[self.star_basis(t)] * s.conj()).conj()
            })
            .collect();
        self.dual_element(out)
    }

    pub fn counit_dual(&self) -> DualElement {
        self.dual_element((0..self.dim()).map(|k| C64::new(self.counit_basis(k), 0.0)).collect())
    }

    pub fn chi(&self) -> DualElement {
        let v = self
            .basis
            .elems
            .iter()
            .map(|e| {
                if e.a == e.c && e.b == e.d {
                    C64::new(self.d(e.b) / (self.d(e.a) * self.sqrt_d[e.i]), 0.0)
                } else {
                    ZERO
                }
            })
            .collect();
        self.dual_element(v)
    }

    /// `‖e_k‖²` in the `χ` inner product.
    pub fn basis_norm_sq(&self, k: usize) -> f64 {
        let e = self.basis.elems[k];
        self.d(e.d) / (self.d(e.c) * self.d(e.i))
    }

    /// `(x, y) = χ(x* y)`.
    pub fn inner_product(&self, x: &GroupoidElement, y: &GroupoidElement) -> C64 {
        let xs = self.star(x);
        let p = self.mul_raw(&xs.coeffs, &y.coeffs);
        self.pairing(&self.chi(), &self.element(p))
    }

    pub fn lambda_element(&self) -> GroupoidElement {
        let dd = self.cat.total_dim_sq();
        let v = self
            .basis
            .elems
            .iter()
            .map(|e| {
                if e.i == 0 && e.a == e.b && e.c == e.d {
                    C64::new(self.d(e.a) * self.d(e.c) / dd, 0.0)
                } else {
                    ZERO
                }
            })
            .collect();
        self.element(v)
    }

    pub fn dual_lambda(&self) -> DualElement {
        let dd = self.cat.total_dim_sq();
        let v = self
            .basis
            .elems
            .iter()
            .map(|e| if e.a == e.c && e.b == e.d { C64::new(self.sqrt_d[e.i] / dd, 0.0) } else { ZERO })
            .collect();
        self.dual_element(v)
    }

    /// Pivotal element `g = Σ (d_b/d_a) √d_i e^{ab}_{i;ab}`, with `S²(x) = g x g⁻¹`.
    pub fn pivotal(&self) -> GroupoidElement {
        let v = self
            .basis
            .elems
            .iter()
            .map(|e| if e.a == e.c && e.b == e.d { C64::new(self.d(e.b) / self.d(e.a) * self.sqrt_d[e.i], 0.0) } else { ZERO })
            .collect();
        self.element(v)
    }

    pub fn pivotal_inv(&self) -> GroupoidElement {
        let v = self
            .basis
            .elems
            .iter()
            .map(|e| if e.a == e.c && e.b == e.d { C64::new(self.d(e.a) / self.d(e.b) * self.sqrt_d[e.i], 0.0) } else { ZERO })
            .collect();
        self.element(v)
    }

    /// `λ_μ = (1/√d_μ) Σ_{a,b} ê^{ab}_{μ;ab}`, so that `Σ_μ (d_μ/D²) λ_μ = λ`.
    pub fn dual_lambda_mu(&self, mu: usize) -> Result<DualElement, Error> {
        if mu >= self.cat.rank() {
            return Err(Error::UnknownLabel(mu.to_string()));
        }
        let v = self
            .basis
            .elems
            .iter()
            .map(|e| if e.i == mu && e.a == e.c && e.b == e.d { C64::new(1.0 / self.sqrt_d[mu], 0.0) } else { ZERO })
            .collect();
        Ok(self.dual_element(v))
    }

    /// `Δ²(Λ)` assembled from symmetric 6j-symbols.
    pub fn lambda_double_coproduct_formula(&self) -> TensorElement {
        let cat = &self.cat;
        let r = cat.rank();
        let dd = cat.total_dim_sq();
        let mut out = self.tensor(3);
        for i in 0..r {
            for j in 0..r {
                for k in 0..r {
                    let pre = (self.sqrt_d[i] * self.sqrt_d[j] * self.sqrt_d[k]) / dd;
                    for t in crate::fusion_data::tuples(r, 6) {
                        let [a, b, c, d, p, q] = [t[0], t[1], t[2], t[3], t[4], t[5]];
                        let (Some(x), Some(y), Some(z)) = (
                            self.basis.index_of(a, c, i, b, d),
                            self.basis.index_of(c, p, j, d, q),
                            self.basis.index_of(p, a, k, q, b),
                        ) else {
                            continue;
                        };
                        let v = cat.g(i, k, j, p, c, a) * cat.g(i, j, k, q, b, d) * pre;
                        if v.norm() > DROP {
                            out.add(vec![x, y, z], v);
                        }
                    }
                }
            }
        }
        out.pruned()
    }

    /// Closed form `Δ(Λ) = (1/D²) Σ √(d_a d_b d_c d_d) e^{ac}_{i;bd} ⊗ e^{ca}_{i;db}`.
    pub fn lambda_coproduct_formula(&self) -> TensorElement {
        let r = self.cat.rank();
        let dd = self.cat.total_dim_sq();
        let mut out = self.tensor(2);
        for t in crate::fusion_data::tuples(r, 5) {
            let [a, b, c, d, i] = [t[0], t[1], t[2], t[3], t[4]];
            if let (Some(x), Some(y)) = (self.basis.index_of(a, c, i, b, d), self.basis.index_of(c, a, i, d, b)) {
                let v = (self.d(a) * self.d(b) * self.d(c) * self.d(d)).sqrt() / dd;
                out.add(vec![x, y], C64::new(v, 0.0));
            }
        }
        out.pruned()
    }

    /// Temperley–Lieb–Jones generators for the Fibonacci groupoid.
    pub fn tlj_generators(&self) -> Result<[GroupoidElement; 3], Error> {
        if self.cat.rank() != 2 || (self.d(1) - crate::fusion_data::golden_ratio()).abs() > 1e-12 {
            return Err(Error::Invalid("TLJ generators need the Fibonacci category".into()));
        }
        let phi = crate::fusion_data::golden_ratio();
        let (o, t) = (0usize, 1usize);
        let build = |terms: &[(f64, [usize; 5])]| -> GroupoidElement {
            let mut v = vec![ZERO; self.dim()];
            for &(c, [a, b, i, cc, d]) in terms {
                v[self.basis.index_of(a, b, i, cc, d).expect("basis element")] += c;
            }
            self.element(v)
        };
        let e0 = build(&[(phi, [o, o, o, o, o]), (phi.powf(1.5), [o, t, t, o, t])]);
        let e1 = build(&[
            (1.0 / phi, [o, o, o, o, o]),
            (phi.powf(-0.5), [o, o, o, t, t]),
            (phi.powf(-0.5), [t, t, o, o, o]),
            (1.0, [t, t, o, t, t]),
            (phi.powf(-0.5), [o, t, t, o, t]),
            (1.0, [o, t, t, t, o]),
            (1.0, [t, o, t, o, t]),
            (phi.powf(0.5), [t, o, t, t, o]),
        ]);
        let e2 = build(&[
            (phi, [o, o, o, o, o]),
            (phi.powf(0.5), [t, o, t, t, o]),
            (1.0, [t, o, t, t, t]),
            (1.0, [t, t, t, t, o]),
            (phi.powf(-0.5), [t, t, t, t, t]),
        ]);
        Ok([e0, e1, e2])
    }
}

impl GroupoidElement {
    pub fn gid(&self) -> u64 {
        self.gid
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { gid: self.gid, coeffs: prune(self.coeffs.iter().map(|v| v * s).collect()) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { gid: self.gid, coeffs: prune(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect()) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let m: serde_json::Map<String, serde_json::Value> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > DROP)
            .map(|(k, v)| (k.to_string(), serde_json::json!([v.re, v.im])))
            .collect();
        serde_json::Value::Object(m)
    }
}

impl DualElement {
    pub fn gid(&self) -> u64 {
        self.gid
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { gid: self.gid, coeffs: prune(self.coeffs.iter().map(|v| v * s).collect()) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { gid: self.gid, coeffs: prune(self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect()) }
    }

    pub fn max_diff(&self, o: &Self) -> f64 {
        self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

fn max_diff(x: &[C64], y: &[C64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

/// Weak Hopf axioms of `H_C`, each checked over all basis vectors (pairs,
/// triples where multilinear).
pub fn verify_groupoid_axioms(g: &Groupoid, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("groupoid:{}", g.cat.name));
    let n = g.dim();
    let basis: Vec<GroupoidElement> = (0..n).map(|k| g.basis_element(k)).collect();
    let eta = g.unit();

    // associativity and unit
    let mut res = 0f64;
    for x in &basis {
        for y in &basis {
            let xy = g.mul_raw(&x.coeffs, &y.coeffs);
            for z in &basis {
                let l = g.mul_raw(&xy, &z.coeffs);
                let r = g.mul_raw(&x.coeffs, &g.mul_raw(&y.coeffs, &z.coeffs));
                res = res.max(max_diff(&l, &r));
            }
        }
    }
    rep.residual("associativity", res, tol);
    let mut res = 0f64;
    for x in &basis {
        res = res.max(max_diff(&g.mul_raw(&x.coeffs, &eta.coeffs), &x.coeffs));
        res = res.max(max_diff(&g.mul_raw(&eta.coeffs, &x.coeffs), &x.coeffs));
    }
    rep.residual("unit", res, tol);

    // Δ multiplicative
    let deltas: Vec<TensorElement> = basis.iter().map(|x| g.comultiply(x, CoproductMode::FSymbol)).collect();
    let mut res = 0f64;
    for (kx, x) in basis.iter().enumerate() {
        for (ky, y) in basis.iter().enumerate() {
            let xy = g.element(g.mul_raw(&x.coeffs, &y.coeffs));
            let l = g.comultiply(&xy, CoproductMode::FSymbol);
            let r = g.tensor_mul(&deltas[kx], &deltas[ky]);
            res = res.max(l.max_diff(&r));
        }
    }
    rep.residual("comultiplication multiplicative", res, tol);

    // coassociativity
    let mut res = 0f64;
    for d in &deltas {
        let l = g.delta_on_factor(d, 0);
        let r = g.delta_on_factor(d, 1);
        res = res.max(l.max_diff(&r));
    }
    rep.residual("coassociativity", res, tol);

    // counit on either leg
    let mut res = 0f64;
    for (k, d) in deltas.iter().enumerate() {
        let mut left = vec![ZERO; n];
        let mut right = vec![ZERO; n];
        for (key, &v) in &d.terms {
            left[key[1]] += v * g.counit_basis(key[0]);
            right[key[0]] += v * g.counit_basis(key[1]);
        }
        res = res.max(max_diff(&left, &basis[k].coeffs)).max(max_diff(&right, &basis[k].coeffs));
    }
    rep.residual("counit (ε⊗id)Δ = id = (id⊗ε)Δ", res, tol);

    // axiom (1): (Δ⊗id)Δ(η) = (Δ(η)⊗η)(η⊗Δ(η)) = (η⊗Δ(η))(Δ(η)⊗η)
    let de = g.comultiply(&eta, CoproductMode::FSymbol);
    let dde = g.delta_on_factor(&de, 0);
    let mut de_eta = g.tensor(3);
    let mut eta_de = g.tensor(3);
    for (key, &v) in &de.terms {
        for (k, &e) in eta.coeffs.iter().enumerate() {
            if e != ZERO {
                de_eta.add(vec![key[0], key[1], k], v * e);
                eta_de.add(vec![k, key[0], key[1]], v * e);
            }
        }
    }
    let a1 = g.tensor_mul(&de_eta, &eta_de);
    let a2 = g.tensor_mul(&eta_de, &de_eta);
    rep.residual("unit coproduct axiom", dde.max_diff(&a1).max(dde.max_diff(&a2)), tol);

    // axiom (2): ε(xyz) = ε(x y_(1)) ε(y_(2) z) = ε(x y_(2)) ε(y_(1) z)
    let eps_prod = |p: usize, q: usize| -> f64 { g.basis_mul(p, q).map(|(z, c)| c * g.counit_basis(z)).unwrap_or(0.0) };
    let mut res = 0f64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let lhs = match g.basis_mul(x, y).and_then(|(xy, c1)| g.basis_mul(xy, z).map(|(w, c2)| c1 * c2 * g.counit_basis(w))) {
                    Some(v) => v,
                    None => 0.0,
                };
                let mut m1 = ZERO;
                let mut m2 = ZERO;
                for &(p, q, v) in &g.coprod_f[y] {
                    m1 += v * eps_prod(x, p) * eps_prod(q, z);
                    m2 += v * eps_prod(x, q) * eps_prod(p, z);
                }
                res = res.max((m1 - lhs).norm()).max((m2 - lhs).norm());
            }
        }
    }
    rep.residual("counit axiom", res, tol);

    // axiom (3): antipode
    let (mut r1, mut r2, mut r3) = (0f64, 0f64, 0f64);
    for (k, x) in basis.iter().enumerate() {
        let et = g.counital(x, Side::Target);
        let es = g.counital(x, Side::Source);
        let mut l1 = vec![ZERO; n];
        let mut l2 = vec![ZERO; n];
        for &(p, q, v) in &g.coprod_f[k] {
            let (sq, cq) = g.antipode[q];
            if let Some((z, c)) = g.basis_mul(p, sq) {
                l1[z] += v * cq * c;
            }
            let (sp, cp) = g.antipode[p];
            if let Some((z, c)) = g.basis_mul(sp, q) {
                l2[z] += v * cp * c;
            }
        }
        r1 = r1.max(max_diff(&l1, &et.coeffs));
        r2 = r2.max(max_diff(&l2, &es.coeffs));
        let dd = g.delta_on_factor(&deltas[k], 0);
        let mut l3 = vec![ZERO; n];
        for (key, &v) in &dd.terms {
            let (s1, c1) = g.antipode[key[0]];
            let (s3, c3) = g.antipode[key[2]];
            if let Some((z, c)) = g.basis_mul(s1, key[1]) {
                if let Some((w, c2)) = g.basis_mul(z, s3) {
                    l3[w] += v * c1 * c3 * c * c2;
                }
            }
        }
        r3 = r3.max(max_diff(&l3, &g.antipode(x).coeffs));
    }
    rep.residual("antipode h1 S(h2) = ε_t(h)", r1, tol);
    rep.residual("antipode S(h1) h2 = ε_s(h)", r2, tol);
    rep.residual("antipode S(h1) h2 S(h3) = S(h)", r3, tol);

    // Δ is a *-homomorphism
    let mut res = 0f64;
    for (k, x) in basis.iter().enumerate() {
        let l = g.comultiply(&g.star(x), CoproductMode::FSymbol);
        let r = g.tensor_star(&deltas[k]);
        res = res.max(l.max_diff(&r));
    }
    rep.residual("comultiplication preserves *", res, tol);

    // star is an anti-multiplicative involution
    let mut res = 0f64;
    for x in &basis {
        for y in &basis {
            let l = g.star(&g.element(g.mul_raw(&x.coeffs, &y.coeffs)));
            let r = g.mul_raw(&g.star(y).coeffs, &g.star(x).coeffs);
            res = res.max(max_diff(&l.coeffs, &r));
        }
        res = res.max(max_diff(&g.star(&g.star(x)).coeffs, &x.coeffs));
    }
    rep.residual("star anti-multiplicative involution", res, tol);

    // counital maps are idempotent and agree with the antipode forms above
    let mut res = 0f64;
    for x in &basis {
        for side in [Side::Target, Side::Source] {
            let e1 = g.counital(x, side);
            let e2 = g.counital(&e1, side);
            res = res.max(max_diff(&e1.coeffs, &e2.coeffs));
        }
    }
    rep.residual("counital maps idempotent", res, tol);

    // two coproduct displays agree
    let mut res = 0f64;
    for x in &basis {
        let a = g.comultiply(x, CoproductMode::FSymbol);
        let b = g.comultiply(x, CoproductMode::GSymbol);
        res = res.max(a.max_diff(&b));
    }
    rep.residual("coproduct F-form equals G-form", res, tol);
    rep
}

/// Properties of `Λ`, `λ` and `λ_μ`.
pub fn verify_canonical_elements(g: &Groupoid, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("canonical:{}", g.cat.name));
    let n = g.dim();
    let lam = g.lambda_element();
    let dl = g.comultiply(&lam, CoproductMode::FSymbol);
    rep.residual("Δ^op(Λ) = Δ(Λ)", dl.max_diff(&g.flip(&dl)), tol);
    rep.residual("Δ(Λ) matches closed form", dl.max_diff(&g.lambda_coproduct_formula()), tol);
    let l2 = g.mul_raw(&lam.coeffs, &lam.coeffs);
    rep.residual("Λ² = Λ", max_diff(&l2, &lam.coeffs), tol);
    rep.residual("S(Λ) = Λ", max_diff(&g.antipode(&lam).coeffs, &lam.coeffs), tol);
    rep.residual("Λ* = Λ", max_diff(&g.star(&lam).coeffs, &lam.coeffs), tol);
    let ddl = g.comultiply_twice(&lam);
    rep.residual("Δ²(Λ) matches 6j display", ddl.max_diff(&g.lambda_double_coproduct_formula()), tol);

    let check_trace = |rep: &mut VerificationReport, name: &str, f: &DualElement| {
        let mut tr = 0f64;
        let mut mult = 0f64;
        for x in 0..n {
            for y in 0..n {
                let xy = g.basis_mul(x, y).map(|(z, c)| f.coeffs[z] * c).unwrap_or(ZERO);
                let yx = g.basis_mul(y, x).map(|(z, c)| f.coeffs[z] * c).unwrap_or(ZERO);
                tr = tr.max((xy - yx).norm());
                mult = mult.max((xy - f.coeffs[x] * f.coeffs[y]).norm());
            }
        }
        let mut s_inv = 0f64;
        let mut star = 0f64;
        for x in 0..n {
            let (sx, c) = g.antipode[x];
            s_inv = s_inv.max((f.coeffs[sx] * c - f.coeffs[x]).norm());
            // x* = e_{x*} with unit coefficient on a basis vector
            star = star.max((f.coeffs[g.star_basis(x)] - f.coeffs[x].conj()).norm());
        }
        rep.residual(&format!("{name}(xy) = {name}(yx)"), tr, tol);
        rep.residual(&format!("{name}(S(x)) = {name}(x)"), s_inv, tol);
        rep.residual(&format!("{name}(x*) = conj {name}(x)"), star, tol);
        rep.info(&format!("{name}(xy) - {name}(x){name}(y) (informational)"), mult, None);
    };

    let dl = g.dual_lambda();
    rep.residual("λλ = λ", dl.max_diff(&g.convolution(&dl, &dl)), tol);
    rep.residual("λ* = λ", dl.max_diff(&g.dual_star(&dl)), tol);
    check_trace(&mut rep, "λ", &dl);
    let dd = g.cat.total_dim_sq();
    let mut sum = g.dual_element(vec![ZERO; n]);
    for mu in 0..g.cat.rank() {
        let lm = g.dual_lambda_mu(mu).expect("label in range");
        check_trace(&mut rep, &format!("λ_{mu}"), &lm);
        sum = sum.add(&lm.scale(C64::new(g.d(mu) / dd, 0.0)));
    }
    rep.residual("Σ_μ (d_μ/D²) λ_μ = λ", sum.max_diff(&dl), tol);
    rep
}

/// Temperley–Lieb–Jones relations among the Fibonacci generators.
pub fn verify_tlj(g: &Groupoid, tol: f64) -> Result<VerificationReport, Error> {
    let mut rep = VerificationReport::new(format!("tlj:{}", g.cat.name));
    let [e0, e1, e2] = g.tlj_generators()?;
    let phi = crate::fusion_data::golden_ratio();
    let m = |x: &GroupoidElement, y: &GroupoidElement| g.multiply(x, y).expect("same groupoid");
    let m3 = |x: &GroupoidElement, y: &GroupoidElement, z: &GroupoidElement| m(&m(x, y), z);
    let diff = |x: &GroupoidElement, y: &GroupoidElement| max_diff(&x.coeffs, &y.coeffs);
    let sc = |x: &GroupoidElement, s: f64| g.element(x.coeffs.iter().map(|c| c * s).collect());
    let add = |terms: &[(f64, GroupoidElement)]| {
        let mut v = vec![ZERO; g.dim()];
        for (s, x) in terms {
            for (a, b) in v.iter_mut().zip(&x.coeffs) {
                *a += b * s;
            }
        }
        g.element(v)
    };
    let sq = [&e0, &e1, &e2].iter().map(|e| diff(&m(e, e), &sc(e, phi))).fold(0f64, f64::max);
    rep.residual("e_k² = φ e_k, k = 0, 1, 2", sq, tol);
    rep.residual("e_0 e_1 e_0 = e_0", diff(&m3(&e0, &e1, &e0), &e0), tol);
    rep.residual("e_1 e_0 e_1 = e_1", diff(&m3(&e1, &e0, &e1), &e1), tol);
    rep.residual("e_1 e_2 e_1 = e_1", diff(&m3(&e1, &e2, &e1), &e1), tol);
    rep.residual("e_2 e_1 e_2 = e_2", diff(&m3(&e2, &e1, &e2), &e2), tol);
    rep.residual("e_0 e_2 = e_2 e_0", diff(&m(&e0, &e2), &m(&e2, &e0)), tol);
    let long = add(&[
        (phi * phi, e1.clone()),
        (phi, e0.clone()),
        (phi, e2.clone()),
        (-phi, m(&e0, &e1)),
        (-phi, m(&e1, &e0)),
        (-phi, m(&e1, &e2)),
        (-phi, m(&e2, &e1)),
        (-phi * phi, m(&e0, &e2)),
        (1.0, m3(&e0, &e1, &e2)),
        (1.0, m3(&e2, &e1, &e0)),
        (phi, m3(&e1, &e0, &e2)),
        (phi, m3(&e2, &e0, &e1)),
        (-1.0, m(&m3(&e1, &e0, &e2), &e1)),
    ]);
    rep.residual("degree-4 relation equals the unit", diff(&long, &g.unit()), tol);
    Ok(rep)
}
