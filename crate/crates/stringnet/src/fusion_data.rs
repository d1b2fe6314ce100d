//! Multiplicity-free, self-dual unitary fusion data.
//!
//! `F^{abc}_{d;nm}` is indexed with `m` the channel of `a⊗b` and `n` the
//! channel of `b⊗c`. An entry is stored only when all four couplings
//! `(a,b,m) (m,c,d) (b,c,n) (a,n,d)` are admissible.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::report::VerificationReport;
use crate::{Error, C64};

#[derive(Clone, Debug)]
pub struct FusionCategory {
    pub name: String,
    labels: Vec<String>,
    qdim: Vec<f64>,
    adm: Vec<bool>,
    f: Vec<C64>,
    stored: Vec<bool>,
}

#[derive(Deserialize, Serialize)]
#[serde(untagged)]
enum LabelRef {
    Index(usize),
    Name(String),
}

#[derive(Deserialize, Serialize)]
struct FRecord {
    a: LabelRef,
    b: LabelRef,
    c: LabelRef,
    d: LabelRef,
    n: LabelRef,
    m: LabelRef,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Deserialize, Serialize)]
struct CategoryFile {
    #[serde(default)]
    name: Option<String>,
    labels: Vec<String>,
    qdim: Vec<f64>,
    admissible: Vec<[LabelRef; 3]>,
    f_symbols: Vec<FRecord>,
}

impl FusionCategory {
    /// Category with the given fusion rules and every F-symbol unset (zero).
    pub fn empty(name: &str, labels: Vec<String>, qdim: Vec<f64>) -> Self {
        let n = labels.len();
        Self {
            name: name.into(),
            labels,
            qdim,
            adm: vec![false; n * n * n],
            f: vec![C64::new(0.0, 0.0); n.pow(6)],
            stored: vec![false; n.pow(6)],
        }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    pub fn qdim(&self, a: usize) -> f64 {
        self.qdim[a]
    }

    pub fn qdims(&self) -> &[f64] {
        &self.qdim
    }

    pub fn total_dim_sq(&self) -> f64 {
        self.qdim.iter().map(|d| d * d).sum()
    }

    #[inline]
    pub fn adm(&self, a: usize, b: usize, c: usize) -> bool {
        let n = self.rank();
        self.adm[(a * n + b) * n + c]
    }

    pub fn set_adm(&mut self, a: usize, b: usize, c: usize, v: bool) {
        let n = self.rank();
        self.adm[(a * n + b) * n + c] = v;
    }

    /// All admissible ordered triples.
    pub fn admissible_triples(&self) -> Vec<[usize; 3]> {
        let n = self.rank();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.adm(a, b, c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Channels `c` with `(a,b,c)` admissible.
    pub fn channels(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rank()).filter(move |&c| self.adm(a, b, c))
    }

    #[inline]
    fn fidx(&self, t: [usize; 6]) -> usize {
        let n = self.rank();
        t.iter().fold(0, |acc, &x| acc * n + x)
    }

    /// Whether the four couplings of `F^{abc}_{d;nm}` are admissible.
    pub fn f_couplings_ok(&self, a: usize, b: usize, c: usize, d: usize, n: usize, m: usize) -> bool {
        self.adm(a, b, m) && self.adm(m, c, d) && self.adm(b, c, n) && self.adm(a, n, d)
    }

    #[inline]
    pub fn f(&self, a: usize, b: usize, c: usize, d: usize, n: usize, m: usize) -> C64 {
        self.f[self.fidx([a, b, c, d, n, m])]
    }

    pub fn is_stored(&self, a: usize, b: usize, c: usize, d: usize, n: usize, m: usize) -> bool {
        self.stored[self.fidx([a, b, c, d, n, m])]
    }

    pub fn set_f(&mut self, a: usize, b: usize, c: usize, d: usize, n: usize, m: usize, v: C64) {
        let i = self.fidx([a, b, c, d, n, m]);
        self.f[i] = v;
        self.stored[i] = true;
    }

    /// Set every admissible F-symbol to one.
    fn fill_admissible_with_one(&mut self) {
        let r = self.rank();
        for t in tuples(r, 6) {
            if self.f_couplings_ok(t[0], t[1], t[2], t[3], t[4], t[5]) {
                self.set_f(t[0], t[1], t[2], t[3], t[4], t[5], C64::new(1.0, 0.0));
            }
        }
    }

    /// Stored F-entries as `([a,b,c,d,n,m], value)`.
    pub fn stored_f(&self) -> Vec<([usize; 6], C64)> {
        tuples(self.rank(), 6)
            .filter(|t| self.stored[self.fidx([t[0], t[1], t[2], t[3], t[4], t[5]])])
            .map(|t| {
                let k = [t[0], t[1], t[2], t[3], t[4], t[5]];
                (k, self.f[self.fidx(k)])
            })
            .collect()
    }

    fn check_label(&self, a: usize) -> Result<(), Error> {
        if a < self.rank() {
            Ok(())
        } else {
            Err(Error::UnknownLabel(a.to_string()))
        }
    }

    /// `θ(a,b,c) = √(d_a d_b d_c)` when admissible.
    pub fn theta_symbol(&self, a: usize, b: usize, c: usize) -> Result<f64, Error> {
        for x in [a, b, c] {
            self.check_label(x)?;
        }
        Ok(if self.adm(a, b, c) { (self.qdim(a) * self.qdim(b) * self.qdim(c)).sqrt() } else { 0.0 })
    }

    /// Symmetric 6j-symbol `G^{abc}_{kmn} = √(d_m d_k)/√d_c · F^{amk}_{b;cn}`.
    pub fn g_symbol(&self, a: usize, b: usize, c: usize, k: usize, m: usize, n: usize) -> Result<C64, Error> {
        for x in [a, b, c, k, m, n] {
            self.check_label(x)?;
        }
        Ok(self.g(a, b, c, k, m, n))
    }

    /// Unchecked `g_symbol`.
    #[inline]
    pub fn g(&self, a: usize, b: usize, c: usize, k: usize, m: usize, n: usize) -> C64 {
        if !(self.adm(a, m, n) && self.adm(n, k, b) && self.adm(m, k, c) && self.adm(a, c, b)) {
            return C64::new(0.0, 0.0);
        }
        let s = (self.qdim(m) * self.qdim(k)).sqrt() / self.qdim(c).sqrt();
        self.f(a, m, k, b, c, n) * s
    }

    pub fn from_json(text: &str) -> Result<Self, Error> {
        let file: CategoryFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let nl = file.labels.len();
        if nl == 0 {
            return Err(Error::Parse("no labels".into()));
        }
        if file.qdim.len() != nl {
            return Err(Error::Parse(format!("qdim has {} entries for {} labels", file.qdim.len(), nl)));
        }
        let mut names = HashSet::new();
        for l in &file.labels {
            if !names.insert(l.clone()) {
                return Err(Error::Duplicate(format!("label {l}")));
            }
        }
        let mut cat = FusionCategory::empty(file.name.as_deref().unwrap_or("custom"), file.labels, file.qdim);
        let resolve = |cat: &FusionCategory, r: &LabelRef| -> Result<usize, Error> {
            match r {
                LabelRef::Index(i) if *i < nl => Ok(*i),
                LabelRef::Index(i) => Err(Error::UnknownLabel(i.to_string())),
                LabelRef::Name(s) => cat.label_index(s).ok_or_else(|| Error::UnknownLabel(s.clone())),
            }
        };
        for t in &file.admissible {
            let (a, b, c) = (resolve(&cat, &t[0])?, resolve(&cat, &t[1])?, resolve(&cat, &t[2])?);
            if cat.adm(a, b, c) {
                return Err(Error::Duplicate(format!("admissible triple ({a},{b},{c})")));
            }
            cat.set_adm(a, b, c, true);
        }
        for r in &file.f_symbols {
            let k = [&r.a, &r.b, &r.c, &r.d, &r.n, &r.m].map(|x| resolve(&cat, x));
            let mut t = [0usize; 6];
            for (i, x) in k.into_iter().enumerate() {
                t[i] = x?;
            }
            let [a, b, c, d, n, m] = t;
            if !cat.f_couplings_ok(a, b, c, d, n, m) {
                return Err(Error::Consistency(format!(
                    "F-symbol ({a},{b},{c},{d},{n},{m}) references a non-admissible coupling"
                )));
            }
            if cat.is_stored(a, b, c, d, n, m) {
                return Err(Error::Duplicate(format!("F-symbol ({a},{b},{c},{d},{n},{m})")));
            }
            cat.set_f(a, b, c, d, n, m, C64::new(r.re, r.im));
        }
        Ok(cat)
    }

    pub fn to_json(&self) -> String {
        let file = CategoryFile {
            name: Some(self.name.clone()),
            labels: self.labels.clone(),
            qdim: self.qdim.clone(),
            admissible: self
                .admissible_triples()
                .into_iter()
                .map(|t| t.map(LabelRef::Index))
                .collect(),
            f_symbols: self
                .stored_f()
                .into_iter()
                .map(|(k, v)| FRecord {
                    a: LabelRef::Index(k[0]),
                    b: LabelRef::Index(k[1]),
                    c: LabelRef::Index(k[2]),
                    d: LabelRef::Index(k[3]),
                    n: LabelRef::Index(k[4]),
                    m: LabelRef::Index(k[5]),
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("category serializes")
    }
}

/// Read a category file.
pub fn load_category(text: &str) -> Result<FusionCategory, Error> {
    FusionCategory::from_json(text)
}

pub fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

pub fn builtin_category(name: &str) -> Result<FusionCategory, Error> {
    match name {
        "fibonacci" => Ok(fibonacci()),
        "vec_z2" => Ok(vec_z2()),
        _ => Err(Error::UnknownName(name.into())),
    }
}

fn fibonacci() -> FusionCategory {
    let phi = golden_ratio();
    let mut cat = FusionCategory::empty("fibonacci", vec!["1".into(), "tau".into()], vec![1.0, phi]);
    for [a, b, c] in [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0], [1, 1, 1]] {
        cat.set_adm(a, b, c, true);
    }
    cat.fill_admissible_with_one();
    let t = 1;
    let r = |x: f64| C64::new(x, 0.0);
    cat.set_f(t, t, t, t, 0, 0, r(1.0 / phi));
    cat.set_f(t, t, t, t, 1, 0, r(phi.powf(-0.5)));
    cat.set_f(t, t, t, t, 0, 1, r(phi.powf(-0.5)));
    cat.set_f(t, t, t, t, 1, 1, r(-1.0 / phi));
    cat
}

fn vec_z2() -> FusionCategory {
    let mut cat = FusionCategory::empty("vec_z2", vec!["0".into(), "1".into()], vec![1.0, 1.0]);
    for a in 0..2 {
        for b in 0..2 {
            cat.set_adm(a, b, a ^ b, true);
        }
    }
    cat.fill_admissible_with_one();
    cat
}

/// All `len`-tuples over `0..n` in lexicographic order.
pub fn tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(len as u32);
    (0..total).map(move |mut k| {
        let mut t = vec![0; len];
        for i in (0..len).rev() {
            t[i] = k % n;
            k /= n;
        }
        t
    })
}

/// Runs every consistency check on the category data.
pub fn verify_category(cat: &FusionCategory, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("category:{}", cat.name));
    let r = cat.rank();
    let d = |a: usize| cat.qdim(a);

    // structural rules of the fusion ring
    let mut sym_ok = true;
    for t in tuples(r, 3) {
        let (a, b, c) = (t[0], t[1], t[2]);
        let v = cat.adm(a, b, c);
        for p in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            sym_ok &= cat.adm(p.0, p.1, p.2) == v;
        }
    }
    rep.flag("admissibility permutation symmetry", sym_ok, None);
    let mut unit_ok = (d(0) - 1.0).abs() < tol;
    for a in 0..r {
        for b in 0..r {
            unit_ok &= cat.adm(0, a, b) == (a == b);
        }
    }
    rep.flag("unit fusion rule and d_1 = 1", unit_ok, None);
    let mut pos = true;
    for a in 0..r {
        pos &= d(a) > 0.0;
    }
    rep.flag("positive quantum dimensions", pos, None);

    // (v) quantum dimensions
    let mut res = 0f64;
    for a in 0..r {
        for b in 0..r {
            let s: f64 = cat.channels(a, b).map(d).sum();
            res = res.max((d(a) * d(b) - s).abs());
        }
    }
    rep.residual("quantum dimension consistency", res, tol);

    // (i) pentagon
    rep.residual("F pentagon", pentagon_residual(cat), tol);

    // (ii) unitarity of each F^{abc}_d, and the reflection used by the groupoid coproduct
    let mut unit_res = 0f64;
    let mut refl_res = 0f64;
    for t in tuples(r, 4) {
        let (a, b, c, dd) = (t[0], t[1], t[2], t[3]);
        let ns: Vec<usize> = (0..r).filter(|&n| cat.adm(b, c, n) && cat.adm(a, n, dd)).collect();
        let ms: Vec<usize> = (0..r).filter(|&m| cat.adm(a, b, m) && cat.adm(m, c, dd)).collect();
        if ns.len() != ms.len() {
            unit_res = f64::INFINITY;
            continue;
        }
        for &n1 in &ns {
            for &n2 in &ns {
                let s: C64 = ms.iter().map(|&m| cat.f(a, b, c, dd, n1, m) * cat.f(a, b, c, dd, n2, m).conj()).sum();
                let target = if n1 == n2 { 1.0 } else { 0.0 };
                unit_res = unit_res.max((s - target).norm());
            }
            for &m in &ms {
                let x = cat.f(a, b, c, dd, n1, m) - cat.f(dd, c, b, a, n1, m).conj();
                refl_res = refl_res.max(x.norm());
            }
        }
    }
    rep.residual("F unitarity", unit_res, tol);
    rep.residual("F reflection F^{abc}_{d;nm} = conj F^{dcb}_{a;nm}", refl_res, tol);

    // (iii) pentagon for G
    rep.residual("G pentagon", g_pentagon_residual(cat), tol);

    // (iv) the two tetrahedral relations
    let (t1, t2) = tetrahedral_residuals(cat);
    rep.residual("G tetrahedral relation 1", t1, tol);
    rep.residual("G tetrahedral relation 2", t2, tol);
    rep.info("G full tetrahedral orbit (informational)", tetrahedral_orbit_residual(cat), None);

    // (vi) unit normalization
    let mut norm_res = 0f64;
    for t in tuples(r, 6) {
        let [a, b, c, dd, n, m] = [t[0], t[1], t[2], t[3], t[4], t[5]];
        if (a == 0 || b == 0 || c == 0) && cat.f_couplings_ok(a, b, c, dd, n, m) {
            norm_res = norm_res.max((cat.f(a, b, c, dd, n, m) - 1.0).norm());
        }
    }
    rep.residual("F unit normalization", norm_res, tol);
    rep
}

pub fn pentagon_residual(cat: &FusionCategory) -> f64 {
    let r = cat.rank();
    let mut res = 0f64;
    for t in tuples(r, 9) {
        let [a, b, c, d, e, f, m, p, q] = [t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], t[8]];
        let lhs: C64 = (0..r)
            .map(|n| cat.f(b, c, d, q, p, n) * cat.f(a, n, d, f, q, e) * cat.f(a, b, c, e, n, m))
            .sum();
        let rhs = cat.f(a, b, p, f, q, m) * cat.f(m, c, d, f, p, e);
        res = res.max((lhs - rhs).norm());
    }
    res
}

pub fn g_pentagon_residual(cat: &FusionCategory) -> f64 {
    let r = cat.rank();
    let d = |a: usize| cat.qdim(a);
    let mut res = 0f64;
    for t in tuples(r, 9) {
        let [a, b, c, dd, e, f, m, p, q] = [t[0], t[1], t[2], t[3], t[4], t[5], t[6], t[7], t[8]];
        let lhs: C64 = (0..r)
            .map(|n| cat.g(b, q, p, dd, c, n) * cat.g(a, f, q, dd, n, e) * cat.g(a, e, n, c, b, m))
            .sum();
        let rhs = cat.g(a, f, q, p, b, m) * cat.g(m, f, p, dd, c, e) * ((d(c) * d(dd)).sqrt() / d(p).sqrt());
        res = res.max((lhs - rhs).norm());
    }
    res
}

/// Residuals of `G^{mab}_{nce} = √(d_e d_n)/√(d_m d_b) G^{aen}_{cbm}` and
/// `G^{afq}_{pbm} = √(d_p d_m)/√(d_a d_q) G^{fpm}_{baq}`.
pub fn tetrahedral_residuals(cat: &FusionCategory) -> (f64, f64) {
    let r = cat.rank();
    let d = |a: usize| cat.qdim(a);
    let (mut r1, mut r2) = (0f64, 0f64);
    for t in tuples(r, 6) {
        let [a, b, c, e, m, n] = [t[0], t[1], t[2], t[3], t[4], t[5]];
        let lhs = cat.g(m, a, b, n, c, e);
        let rhs = cat.g(a, e, n, c, b, m) * ((d(e) * d(n)).sqrt() / (d(m) * d(b)).sqrt());
        r1 = r1.max((lhs - rhs).norm());
        let [a, b, f, m, p, q] = [t[0], t[1], t[2], t[3], t[4], t[5]];
        let lhs = cat.g(a, f, q, p, b, m);
        let rhs = cat.g(f, p, m, b, a, q) * ((d(p) * d(m)).sqrt() / (d(a) * d(q)).sqrt());
        r2 = r2.max((lhs - rhs).norm());
    }
    (r1, r2)
}

/// Tetrahedral evaluation from the six edges `e_{ij}` between vertices 0..4,
/// given as `[e01, e02, e03, e12, e13, e23]`.
fn tet(cat: &FusionCategory, e: [usize; 6]) -> C64 {
    let [e01, e02, e03, e12, e13, e23] = e;
    let d = |a: usize| cat.qdim(a);
    cat.g(e01, e02, e03, e23, e13, e12) * (d(e01) * d(e02) * d(e03)).sqrt()
}

/// Largest deviation of the tetrahedral evaluation under the 24 vertex
/// permutations. Reported only.
pub fn tetrahedral_orbit_residual(cat: &FusionCategory) -> f64 {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let slot = |i: usize, j: usize| pairs.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap();
    let mut res = 0f64;
    for t in tuples(cat.rank(), 6) {
        let e = [t[0], t[1], t[2], t[3], t[4], t[5]];
        let base = tet(cat, e);
        for perm in tuples(4, 4) {
            let mut seen = [false; 4];
            if perm.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
                continue;
            }
            let mut e2 = [0; 6];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                e2[k] = e[slot(perm[i], perm[j])];
            }
            res = res.max((tet(cat, e2) - base).norm());
        }
    }
    res
}
