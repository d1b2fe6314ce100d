//! The map `Θ: L^K_0 → L^LW_0` and the intertwining check `Θ B^K_p = B^LW_p Θ`.
//!
//! `Θ` sends the l0 basis vector of a labeling to the delta vector of the
//! same labeling. Coefficients of a Kitaev state are read off by orthogonal
//! projection onto the (orthonormal) l0 basis.

use serde::Serialize;

use crate::kitaev::{ground_space_dimension, GsdMethod, KitaevModel, TensorState, EXACT_LIMIT};
use crate::levin_wen::{encode, lw_ground_space_dimension, Flux, LWState, LevinWenModel, PlaquettePath};
use crate::linalg::{self, CMat};
use crate::{Error, C64};

/// Largest Kitaev space on which the l0 basis is expanded densely.
pub const DENSE_L0_LIMIT: usize = 300_000;

#[derive(Clone, Debug, Serialize)]
pub struct CorrespondenceReport {
    pub lattice: String,
    pub category: String,
    pub dim_k0: usize,
    pub dim_lw0: usize,
    /// `max_{p,ℓ} ‖Θ B^K_p |ℓ⟩ − B^LW_p Θ|ℓ⟩‖_∞`; `None` when the Kitaev
    /// space is too large to expand.
    pub residual: Option<f64>,
    /// Same comparison for every `B^μ_p` separately.
    pub flux_residual: Option<f64>,
    /// Part of `B^K_p |ℓ⟩` outside the span of the l0 basis.
    pub leakage: Option<f64>,
    /// Deviation of the l0 Gram matrix from the identity.
    pub gram_distortion: Option<f64>,
    pub gsd_k: Option<usize>,
    pub gsd_k_method: Option<GsdMethod>,
    pub gsd_lw: usize,
    pub seed: u64,
    pub tol: f64,
    pub pass: bool,
}

/// Dense l0 basis of a Kitaev model, ordered like the Levin–Wen labelings.
pub struct L0Basis<'a> {
    pub model: &'a KitaevModel<'a>,
    pub labelings: Vec<Vec<usize>>,
    pub states: Vec<TensorState>,
}

impl<'a> L0Basis<'a> {
    pub fn new(model: &'a KitaevModel<'a>, lw: &LevinWenModel) -> Result<Self, Error> {
        if model.dim() > DENSE_L0_LIMIT {
            return Err(Error::TooLarge(format!("l0 expansion needs dim ≤ {DENSE_L0_LIMIT}, have {}", model.dim())));
        }
        let labelings = lw.labelings().to_vec();
        let mut states = Vec::with_capacity(labelings.len());
        for l in &labelings {
            let st = model.l0_basis_state(l)?;
            if !st.admissible {
                return Err(Error::Invalid(format!("labeling {l:?} has no l0 state")));
            }
            states.push(st.to_dense(model.dim()));
        }
        Ok(Self { model, labelings, states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Projection coefficients `(ℓ, ψ)` and the norm of the remainder.
    pub fn coefficients(&self, psi: &TensorState) -> (Vec<C64>, f64) {
        let c: Vec<C64> = self.states.iter().map(|s| self.model.inner(s, psi)).collect();
        let mut r = psi.clone();
        for (s, &x) in self.states.iter().zip(&c) {
            r.axpy(-x, s);
        }
        let rest = self.model.inner(&r, &r).re.max(0.0).sqrt();
        (c, rest)
    }

    /// `Σ_ℓ c_ℓ |ℓ⟩_K`.
    pub fn combine(&self, c: &[C64]) -> TensorState {
        let mut out = self.model.zero_state();
        for (s, &x) in self.states.iter().zip(c) {
            if x != linalg::zero() {
                out.axpy(x, s);
            }
        }
        out
    }

    pub fn gram(&self) -> CMat {
        let n = self.len();
        CMat::from_fn(n, n, |i, j| self.model.inner(&self.states[i], &self.states[j]))
    }
}

/// `Θ(ψ)` for `ψ ∈ L^K_0`.
pub fn theta_map(basis: &L0Basis, lw: &LevinWenModel, psi: &TensorState, tol: f64) -> Result<LWState, Error> {
    let k = basis.model;
    let scale = k.inner(psi, psi).re.sqrt().max(1e-300);
    let mut worst = 0f64;
    for v in 0..k.lat.num_vertices() {
        let mut d = k.apply(&k.vertex_stabilizer(v), psi);
        d.axpy(C64::new(-1.0, 0.0), psi);
        worst = worst.max(k.inner(&d, &d).re.max(0.0).sqrt() / scale);
    }
    let (c, rest) = basis.coefficients(psi);
    worst = worst.max(rest / scale);
    if worst > tol {
        return Err(Error::Invalid(format!("state is not in L^K_0 (residual {worst:.3e})")));
    }
    let r = lw.cat.rank();
    let mut amps = vec![linalg::zero(); lw.full_dim()];
    for (l, x) in basis.labelings.iter().zip(c) {
        amps[encode(l, r)] = x;
    }
    Ok(LWState { amps })
}

/// `Θ⁻¹` on `L^LW_0`.
pub fn theta_inverse(basis: &L0Basis, lw: &LevinWenModel, phi: &LWState) -> TensorState {
    let r = lw.cat.rank();
    let c: Vec<C64> = basis.labelings.iter().map(|l| phi.amps[encode(l, r)]).collect();
    basis.combine(&c)
}

/// Coefficient vector of `B` applied to every l0 basis state, as a matrix.
fn kitaev_matrix(basis: &L0Basis, op: &crate::kitaev::SiteOperator) -> (CMat, f64) {
    let n = basis.len();
    let mut m = CMat::zeros(n, n);
    let mut leak = 0f64;
    for (j, s) in basis.states.iter().enumerate() {
        let b = basis.model.apply(op, s);
        let (c, rest) = basis.coefficients(&b);
        leak = leak.max(rest);
        for (i, x) in c.into_iter().enumerate() {
            m[(i, j)] = x;
        }
    }
    (m, leak)
}

/// Compare `B^K_p` and `B^LW_p` through `Θ` on every face, and the two
/// ground-space dimensions.
pub fn verify_intertwining(k: &KitaevModel, lw: &LevinWenModel, tol: f64, seed: u64) -> Result<CorrespondenceReport, Error> {
    let dim_k0 = k.l0_dimension()?;
    let dim_lw0 = lw.labelings().len();
    let gsd_lw = lw_ground_space_dimension(lw)?.gsd;
    let mut rep = CorrespondenceReport {
        lattice: k.lat.name.clone(),
        category: k.g.cat.name.clone(),
        dim_k0,
        dim_lw0,
        residual: None,
        flux_residual: None,
        leakage: None,
        gram_distortion: None,
        gsd_k: None,
        gsd_k_method: None,
        gsd_lw,
        seed,
        tol,
        pass: false,
    };
    if k.dim() <= DENSE_L0_LIMIT {
        let basis = L0Basis::new(k, lw)?;
        let gram = basis.gram();
        rep.gram_distortion = Some(linalg::max_abs(&(gram - CMat::identity(basis.len(), basis.len()))));
        let mut res = 0f64;
        let mut flux = 0f64;
        let mut leak = 0f64;
        for f in 0..k.lat.num_faces() {
            let (mk, l) = kitaev_matrix(&basis, &k.face_stabilizer(f));
            leak = leak.max(l);
            let ml = lw.plaquette_matrix(f, Flux::Full, PlaquettePath::GSymbol);
            res = res.max(linalg::max_abs(&(mk - ml)));
            let site = k.face_site(f);
            for mu in 0..k.g.cat.rank() {
                let op = k.plaquette_operator(&k.g.dual_lambda_mu(mu)?, &site)?;
                let (mk, l) = kitaev_matrix(&basis, &op);
                leak = leak.max(l);
                let ml = lw.plaquette_matrix(f, Flux::Label(mu), PlaquettePath::GSymbol);
                flux = flux.max(linalg::max_abs(&(mk - ml)));
            }
        }
        rep.residual = Some(res);
        rep.flux_residual = Some(flux);
        rep.leakage = Some(leak);
    }
    let method = if k.dim() <= EXACT_LIMIT { GsdMethod::ExactTrace } else { GsdMethod::RandomizedRank };
    if k.dim() <= crate::kitaev::DENSE_LIMIT {
        rep.gsd_k = Some(ground_space_dimension(k, method, seed)?.gsd);
        rep.gsd_k_method = Some(method);
    }
    let small = |x: Option<f64>| x.map_or(true, |r| r < tol);
    rep.pass = dim_k0 == dim_lw0
        && small(rep.residual)
        && small(rep.flux_residual)
        && small(rep.leakage)
        && rep.gsd_k.map_or(true, |g| g == gsd_lw);
    Ok(rep)
}
