//! Simple modules `V_i`, tensor products through `Δ`, Clebsch–Gordan maps and
//! the recoupling data of the representation category.

use crate::groupoid::{Groupoid, Side};
use crate::linalg::{self, CMat};
use crate::report::VerificationReport;
use crate::{Error, C64};

#[derive(Clone, Debug)]
pub struct SimpleModule {
    pub label: usize,
    pub basis: Vec<(usize, usize)>,
}

impl SimpleModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, a: usize, b: usize) -> Option<usize> {
        self.basis.iter().position(|&p| p == (a, b))
    }
}

pub fn simple_module(g: &Groupoid, i: usize) -> Result<SimpleModule, Error> {
    if i >= g.cat.rank() {
        return Err(Error::UnknownLabel(i.to_string()));
    }
    Ok(SimpleModule { label: i, basis: g.basis.pairs[i].clone() })
}

/// Matrix of basis vector `k` on `V_i`.
pub fn rho_basis(g: &Groupoid, i: usize, k: usize) -> CMat {
    let n = g.basis.pairs[i].len();
    let mut m = CMat::zeros(n, n);
    let (j, r, s) = g.basis.block_coords(k);
    if j == i {
        m[(r, s)] = C64::new(1.0 / g.sqrt_d(i), 0.0);
    }
    m
}

pub fn rho(g: &Groupoid, i: usize, x: &[C64]) -> CMat {
    let n = g.basis.pairs[i].len();
    let mut m = CMat::zeros(n, n);
    for (k, &v) in x.iter().enumerate() {
        if v != linalg::zero() {
            m += rho_basis(g, i, k) * v;
        }
    }
    m
}

/// Action of basis vector `k` on `V_j ⊗ V_k` through `Δ`.
pub fn rho_tensor(g: &Groupoid, j: usize, kk: usize, k: usize) -> CMat {
    let (nj, nk) = (g.basis.pairs[j].len(), g.basis.pairs[kk].len());
    let mut m = CMat::zeros(nj * nk, nj * nk);
    for &(p, q, v) in g.delta_basis(k) {
        m += rho_basis(g, j, p).kronecker(&rho_basis(g, kk, q)) * v;
    }
    m
}

/// Clebsch–Gordan embedding `V_i → V_j ⊗ V_k`,
/// `v^{ab}_i ↦ Σ_p F^{ajk}_{b;ip} v^{ap}_j ⊗ v^{pb}_k`, as a matrix.
pub fn clebsch_gordan_embedding(g: &Groupoid, i: usize, j: usize, k: usize) -> Result<CMat, Error> {
    let r = g.cat.rank();
    if i >= r || j >= r || k >= r {
        return Err(Error::UnknownLabel(format!("({i},{j},{k})")));
    }
    if !g.cat.adm(i, j, k) {
        return Err(Error::Invalid(format!("({i},{j},{k}) is not admissible")));
    }
    let (vi, vj, vk) = (&g.basis.pairs[i], &g.basis.pairs[j], &g.basis.pairs[k]);
    let mut m = CMat::zeros(vj.len() * vk.len(), vi.len());
    for (col, &(a, b)) in vi.iter().enumerate() {
        for p in 0..r {
            let (Some(x), Some(y)) = (vj.iter().position(|&t| t == (a, p)), vk.iter().position(|&t| t == (p, b))) else {
                continue;
            };
            m[(x * vk.len() + y, col)] += g.cat.f(a, j, k, b, i, p);
        }
    }
    Ok(m)
}

/// Worst intertwining residual `ρ_{j⊗k}(x) U = U ρ_i(x)` over basis `x`.
pub fn intertwining_residual(g: &Groupoid, i: usize, j: usize, k: usize) -> Result<f64, Error> {
    let u = clebsch_gordan_embedding(g, i, j, k)?;
    let mut res = 0f64;
    for x in 0..g.dim() {
        let l = rho_tensor(g, j, k, x) * &u;
        let rr = &u * rho_basis(g, i, x);
        res = res.max(linalg::max_abs(&(l - rr)));
    }
    Ok(res)
}

/// Dimension of the truncated tensor product `Δ(η)·(V_j ⊗ V_k)`.
pub fn tensor_product_dim(g: &Groupoid, j: usize, k: usize) -> usize {
    let eta = g.unit();
    let mut m = CMat::zeros(0, 0);
    for (x, &v) in eta.coeffs.iter().enumerate() {
        if v != linalg::zero() {
            let t = rho_tensor(g, j, k, x) * v;
            m = if m.nrows() == 0 { t } else { m + t };
        }
    }
    linalg::rank(&m, 1e-9)
}

/// Embedding `V_d → V_a ⊗ V_b ⊗ V_c` through `V_m ⊗ V_c` (left) or `V_a ⊗ V_n` (right).
fn composite_embedding(g: &Groupoid, a: usize, b: usize, c: usize, d: usize, mid: usize, left: bool) -> Option<CMat> {
    let (na, nb, nc) = (g.basis.pairs[a].len(), g.basis.pairs[b].len(), g.basis.pairs[c].len());
    if left {
        let outer = clebsch_gordan_embedding(g, d, mid, c).ok()?;
        let inner = clebsch_gordan_embedding(g, mid, a, b).ok()?;
        let id = CMat::identity(nc, nc);
        Some(inner.kronecker(&id) * outer)
    } else {
        let outer = clebsch_gordan_embedding(g, d, a, mid).ok()?;
        let inner = clebsch_gordan_embedding(g, mid, b, c).ok()?;
        let id = CMat::identity(na, na);
        let _ = nb;
        Some(id.kronecker(&inner) * outer)
    }
}

/// Recoupling coefficient of the representation category: the coefficient
/// of the right-bracketed embedding through `n` in the left-bracketed
/// embedding through `m`. Returns the value and the least-squares residual.
pub fn rep_f_symbol(g: &Groupoid, a: usize, b: usize, c: usize, d: usize, n: usize, m: usize) -> (C64, f64) {
    let r = g.cat.rank();
    let Some(left) = composite_embedding(g, a, b, c, d, m, true) else {
        return (linalg::zero(), 0.0);
    };
    let rights: Vec<(usize, CMat)> =
        (0..r).filter_map(|nn| composite_embedding(g, a, b, c, d, nn, false).map(|w| (nn, w))).collect();
    if rights.is_empty() {
        return (linalg::zero(), left.norm());
    }
    let rows = left.len();
    let mut a_mat = CMat::zeros(rows, rights.len());
    for (col, (_, w)) in rights.iter().enumerate() {
        for (row, v) in w.iter().enumerate() {
            a_mat[(row, col)] = *v;
        }
    }
    let b_mat = CMat::from_iterator(rows, 1, left.iter().copied());
    let (x, res) = linalg::least_squares(&a_mat, &b_mat);
    let v = rights.iter().position(|(nn, _)| *nn == n).map(|p| x[(p, 0)]).unwrap_or(linalg::zero());
    (v, res)
}

/// Block dimensions `dim V_i = #{(a,b) : (a,i,b) admissible}`; needs only the fusion rules.
pub fn block_dimensions(cat: &crate::fusion_data::FusionCategory) -> Vec<usize> {
    let r = cat.rank();
    (0..r).map(|i| (0..r).flat_map(|a| (0..r).map(move |b| (a, b))).filter(|&(a, b)| cat.adm(a, i, b)).count()).collect()
}

pub fn verify_semisimple_decomposition(g: &Groupoid, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("semisimple:{}", g.cat.name));
    let r = g.cat.rank();
    let blocks = block_dimensions(&g.cat);
    let n = g.dim();
    let rho_all = |x: &[C64]| -> Vec<CMat> { (0..r).map(|i| rho(g, i, x)).collect() };
    let basis: Vec<Vec<C64>> = (0..n).map(|k| g.basis_element(k).coeffs).collect();
    let mut mult = 0f64;
    let mut star = 0f64;
    for x in &basis {
        let rx = rho_all(x);
        for y in &basis {
            let ry = rho_all(y);
            let rxy = rho_all(&g.multiply(&g.element(x.clone()), &g.element(y.clone())).unwrap().coeffs);
            for i in 0..r {
                mult = mult.max(linalg::max_abs(&(&rx[i] * &ry[i] - &rxy[i])));
            }
        }
        let rs = rho_all(&g.star(&g.element(x.clone())).coeffs);
        for i in 0..r {
            star = star.max(linalg::max_abs(&(rs[i].clone() - rx[i].adjoint())));
        }
    }
    rep.residual("block map multiplicative", mult, tol);
    let ru = rho_all(&g.unit().coeffs);
    let unit = (0..r).map(|i| linalg::max_abs(&(ru[i].clone() - CMat::identity(blocks[i], blocks[i])))).fold(0.0, f64::max);
    rep.residual("block map unital", unit, tol);
    rep.info("block map *-compatible (orthonormal module bases)", star, None);
    let total: usize = blocks.iter().map(|b| b * b).sum();
    rep.flag("Σ (dim V_i)² = dim H", total == n, Some(format!("blocks {:?}, dim {}", blocks, n)));
    let mut big = CMat::zeros(total, n);
    for (k, x) in basis.iter().enumerate() {
        let mut row = 0;
        for m in rho_all(x) {
            for v in m.iter() {
                big[(row, k)] = *v;
                row += 1;
            }
        }
    }
    let rk = linalg::rank(&big, 1e-10);
    rep.flag("block map bijective", rk == n && total == n, Some(format!("rank {rk}")));
    rep
}

pub fn verify_target_counital_module(g: &Groupoid, tol: f64) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("target-counital:{}", g.cat.name));
    let n = g.dim();
    let r = g.cat.rank();
    let images: Vec<Vec<C64>> = (0..n).map(|k| g.counital(&g.basis_element(k), Side::Target).coeffs).collect();
    let mut idem = 0f64;
    for (k, im) in images.iter().enumerate() {
        let again = g.counital(&g.element(im.clone()), Side::Target);
        idem = idem.max(im.iter().zip(&again.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        let _ = k;
    }
    rep.residual("ε_t ∘ ε_t = ε_t", idem, tol);
    let img = CMat::from_fn(n, n, |row, col| images[col][row]);
    let dim_ht = linalg::rank(&img, 1e-10);
    // displayed spanning vectors, one per label a
    let mut z = CMat::zeros(n, r);
    for a in 0..r {
        for (k, e) in g.basis.elems.iter().enumerate() {
            if e.a == a && e.c == a && e.b == e.d {
                z[(k, a)] = C64::new((g.d(e.i) / g.d(a)).sqrt(), 0.0);
            }
        }
    }
    let rz = linalg::rank(&z, 1e-10);
    let both = linalg::rank(&CMat::from_fn(n, n + r, |row, col| if col < n { img[(row, col)] } else { z[(row, col - n)] }), 1e-10);
    rep.flag(
        "image of ε_t equals span of displayed elements",
        dim_ht == rz && both == dim_ht,
        Some(format!("dim H_t = {dim_ht}, displayed rank {rz}, joint rank {both}")),
    );
    let dim_v1 = g.basis.pairs[0].len();
    rep.flag("dim H_t = dim V_1", dim_ht == dim_v1, Some(format!("{dim_ht} vs {dim_v1}")));

    // H-module structure h·z = ε_t(h z) in the displayed basis, compared with V_1
    let zcols: Vec<Vec<C64>> = (0..r).map(|a| z.column(a).iter().copied().collect()).collect();
    let action: Vec<CMat> = (0..n)
        .map(|k| {
            let mut m = CMat::zeros(r, r);
            for (col, zc) in zcols.iter().enumerate() {
                let hz = g.multiply(&g.basis_element(k), &g.element(zc.clone())).unwrap();
                let v = g.counital(&hz, Side::Target);
                let b = CMat::from_iterator(n, 1, v.coeffs.iter().copied());
                let (x, _) = linalg::least_squares(&z, &b);
                for row in 0..r {
                    m[(row, col)] = x[(row, 0)];
                }
            }
            m
        })
        .collect();
    // intertwiners T with T A(h) = ρ_1(h) T
    let mut sys = CMat::zeros(0, dim_v1 * r);
    for (k, a) in action.iter().enumerate() {
        let rh = rho_basis(g, 0, k);
        let block = a.transpose().kronecker(&CMat::identity(dim_v1, dim_v1)) - CMat::identity(r, r).kronecker(&rh);
        let old = sys.nrows();
        sys = sys.resize_vertically(old + block.nrows(), linalg::zero());
        sys.view_mut((old, 0), (block.nrows(), block.ncols())).copy_from(&block);
    }
    let ns = linalg::null_space(&sys, 1e-9);
    let iso = if ns.ncols() == 1 && dim_v1 == r {
        let t = CMat::from_column_slice(dim_v1, r, ns.column(0).as_slice());
        linalg::rank(&t, 1e-9) == r
    } else {
        false
    };
    rep.flag("H_t ≅ V_1 as H-modules", iso, Some(format!("intertwiner space dim {}", ns.ncols())));
    rep
}
