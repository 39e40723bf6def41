//! Nonlinear right-hand sides in vorticity–current and primitive form.
//!
//! Derivatives are taken in spectral space, products are formed on the
//! collocation grid and every product is dealiased before it is used.

use num_complex::Complex64;

use crate::dynamics::config::SolverConfig;
use crate::dynamics::state::{MHDState, PrimitiveState};
use crate::error::{Error, Result};
use crate::field::{forward_pair, inverse_pair, RealField, SpectralField};
use crate::ops::{
    dealias_in_place, fractional_laplacian, leray_project, partial_derivative, Axis,
};

fn finite_or_abort(fields: &[&RealField], t: f64) -> Result<()> {
    if fields.iter().any(|f| f.samples().iter().any(|v| !v.is_finite())) {
        return Err(Error::Aborted { t, reason: "non-finite value in nonlinear product".into() });
    }
    Ok(())
}

fn to_spectral_pair(a: &RealField, b: &RealField, t: f64) -> Result<(SpectralField, SpectralField)> {
    finite_or_abort(&[a, b], t)?;
    let (mut fa, mut fb) = forward_pair(a, b)?;
    for f in [&mut fa, &mut fb] {
        dealias_in_place(f);
        f.coefficients_mut()[0] = Complex64::new(0.0, 0.0);
        f.set_dealiased(true);
    }
    Ok((fa, fb))
}

/// Non-stiff part of the vorticity–current system:
///
/// ```text
/// dw = −(u·∇)w + (b·∇)j
/// dj = −(u·∇)j + (b·∇)w + 2[∂₁b₁(∂₁u₂ + ∂₂u₁) − ∂₁u₁(∂₁b₂ + ∂₂b₁)]
/// ```
pub fn vorticity_rhs(state: &MHDState) -> Result<(SpectralField, SpectralField)> {
    let [u1, u2] = state.velocity();
    let [b1, b2] = state.magnetic();
    let (w, j) = (state.w(), state.j());
    let d1 = |f: &SpectralField| partial_derivative(f, Axis::X1);
    let d2 = |f: &SpectralField| partial_derivative(f, Axis::X2);

    let strain_u = d1(&u2).add(&d2(&u1))?;
    let strain_b = d1(&b2).add(&d2(&b1))?;

    let (pu1, pu2) = inverse_pair(&u1, &u2)?;
    let (pb1, pb2) = inverse_pair(&b1, &b2)?;
    let (w1, w2) = inverse_pair(&d1(w), &d2(w))?;
    let (j1, j2) = inverse_pair(&d1(j), &d2(j))?;
    let (b11, su) = inverse_pair(&d1(&b1), &strain_u)?;
    let (u11, sb) = inverse_pair(&d1(&u1), &strain_b)?;

    let len = state.grid().len();
    let mut nw = vec![0.0; len];
    let mut nj = vec![0.0; len];
    let (pu1, pu2, pb1, pb2) = (pu1.samples(), pu2.samples(), pb1.samples(), pb2.samples());
    let (w1, w2, j1, j2) = (w1.samples(), w2.samples(), j1.samples(), j2.samples());
    let (b11, su, u11, sb) = (b11.samples(), su.samples(), u11.samples(), sb.samples());
    for i in 0..len {
        nw[i] = -(pu1[i] * w1[i] + pu2[i] * w2[i]) + (pb1[i] * j1[i] + pb2[i] * j2[i]);
        nj[i] = -(pu1[i] * j1[i] + pu2[i] * j2[i])
            + (pb1[i] * w1[i] + pb2[i] * w2[i])
            + 2.0 * (b11[i] * su[i] - u11[i] * sb[i]);
    }
    let grid = state.grid();
    let nw = RealField::from_samples(grid, nw).map_err(|_| nonfinite(state.t))?;
    let nj = RealField::from_samples(grid, nj).map_err(|_| nonfinite(state.t))?;
    to_spectral_pair(&nw, &nj, state.t)
}

fn nonfinite(t: f64) -> Error {
    Error::Aborted { t, reason: "non-finite value in nonlinear product".into() }
}

/// The same non-stiff terms in conservative form,
///
/// ```text
/// dw = −∇·(u w − b j)
/// dj = −Δ(u₁b₂ − u₂b₁)
/// ```
///
/// which needs five transforms instead of seven. After dealiasing it agrees
/// with [`vorticity_rhs`] to round-off; the time stepper uses this form.
pub fn conservative_rhs(state: &MHDState) -> Result<(SpectralField, SpectralField)> {
    let grid = state.grid();
    let n = grid.n() as i64;
    let len = grid.len();
    let (w, j) = (state.w().coefficients(), state.j().coefficients());
    let zero = Complex64::new(0.0, 0.0);
    // Biot–Savart for both fields in one sweep: (iξ₂, −iξ₁)/|ξ|²
    let mut spec = [vec![zero; len], vec![zero; len], vec![zero; len], vec![zero; len]];
    for i in 0..len {
        let (k1, k2) = grid.wavevector(i);
        let q = (k1 * k1 + k2 * k2) as f64;
        if q == 0.0 || 3 * k1.abs().max(k2.abs()) > n {
            continue;
        }
        let (a1, a2) = (k2 as f64 / q, -k1 as f64 / q);
        let iw = Complex64::new(-w[i].im, w[i].re);
        let ij = Complex64::new(-j[i].im, j[i].re);
        spec[0][i] = iw * a1;
        spec[1][i] = iw * a2;
        spec[2][i] = ij * a1;
        spec[3][i] = ij * a2;
    }
    let [su1, su2, sb1, sb2] = spec;
    let field = |d: Vec<Complex64>| SpectralField::from_coefficients(grid, d);
    let (u1, u2) = inverse_pair(&field(su1)?, &field(su2)?)?;
    let (b1, b2) = inverse_pair(&field(sb1)?, &field(sb2)?)?;
    let (pw, pj) = inverse_pair(state.w(), state.j())?;

    let (u1, u2, b1, b2) = (u1.samples(), u2.samples(), b1.samples(), b2.samples());
    let (pw, pj) = (pw.samples(), pj.samples());
    let mut f1 = vec![0.0; len];
    let mut f2 = vec![0.0; len];
    let mut e = vec![0.0; len];
    for i in 0..len {
        f1[i] = u1[i] * pw[i] - b1[i] * pj[i];
        f2[i] = u2[i] * pw[i] - b2[i] * pj[i];
        e[i] = u1[i] * b2[i] - u2[i] * b1[i];
    }
    let real = |d: Vec<f64>| RealField::from_samples(grid, d).map_err(|_| nonfinite(state.t));
    let (f1, f2, e) = (real(f1)?, real(f2)?, real(e)?);
    let (f1, f2) = forward_pair(&f1, &f2)?;
    let e = crate::field::forward(&e)?;
    let (f1, f2, e) = (f1.coefficients(), f2.coefficients(), e.coefficients());
    let mut nw = vec![zero; len];
    let mut nj = vec![zero; len];
    for i in 0..len {
        let (k1, k2) = grid.wavevector(i);
        if (k1 == 0 && k2 == 0) || 3 * k1.abs().max(k2.abs()) > n {
            continue;
        }
        let div = f1[i] * k1 as f64 + f2[i] * k2 as f64;
        nw[i] = Complex64::new(div.im, -div.re);
        nj[i] = e[i] * (k1 * k1 + k2 * k2) as f64;
    }
    let (mut nw, mut nj) = (field(nw)?, field(nj)?);
    nw.set_dealiased(true);
    nj.set_dealiased(true);
    Ok((nw, nj))
}

/// Full time derivative of `(w, j)` including the dissipative terms
/// `−νΛ^{2α}w` and `−ηΛ^{2β}j`.
pub fn full_vorticity_rhs(
    state: &MHDState,
    config: &SolverConfig,
) -> Result<(SpectralField, SpectralField)> {
    let (nw, nj) = vorticity_rhs(state)?;
    let dw = nw.sub(&state.w().apply_symbol(|k1, k2| Complex64::new(config.velocity_damping(k1, k2), 0.0)))?;
    let dj = nj.sub(&state.j().apply_symbol(|k1, k2| Complex64::new(config.magnetic_damping(k1, k2), 0.0)))?;
    Ok((dw, dj))
}

/// Directional derivative `(a·∇)f` evaluated pointwise from physical samples.
fn advect(a: [&[f64]; 2], grad: [&[f64]; 2], out: &mut [f64], sign: f64) {
    for i in 0..out.len() {
        out[i] += sign * (a[0][i] * grad[0][i] + a[1][i] * grad[1][i]);
    }
}

/// Time derivative of `(u, b)` in primitive variables:
///
/// ```text
/// du = P[−(u·∇)u + (b·∇)b] − νΛ^{2α}u
/// db = P[−(u·∇)b + (b·∇)u] − ηΛ^{2β}b
/// ```
///
/// with `P` the Leray projection. Applying `P` to the induction term is a
/// numerical safeguard; analytically it is already divergence-free.
pub fn primitive_rhs(state: &PrimitiveState, config: &SolverConfig) -> Result<PrimitiveState> {
    let grid = state.grid().clone();
    let [u1, u2] = &state.u;
    let [b1, b2] = &state.b;
    let d = |f: &SpectralField, a: Axis| partial_derivative(f, a);

    let (pu1, pu2) = inverse_pair(u1, u2)?;
    let (pb1, pb2) = inverse_pair(b1, b2)?;
    // gradients: [component][axis]
    let (gu11, gu12) = inverse_pair(&d(u1, Axis::X1), &d(u1, Axis::X2))?;
    let (gu21, gu22) = inverse_pair(&d(u2, Axis::X1), &d(u2, Axis::X2))?;
    let (gb11, gb12) = inverse_pair(&d(b1, Axis::X1), &d(b1, Axis::X2))?;
    let (gb21, gb22) = inverse_pair(&d(b2, Axis::X1), &d(b2, Axis::X2))?;

    let u = [pu1.samples(), pu2.samples()];
    let b = [pb1.samples(), pb2.samples()];
    let gu = [[gu11.samples(), gu12.samples()], [gu21.samples(), gu22.samples()]];
    let gb = [[gb11.samples(), gb12.samples()], [gb21.samples(), gb22.samples()]];

    let len = grid.len();
    let mut mom = [vec![0.0; len], vec![0.0; len]];
    let mut ind = [vec![0.0; len], vec![0.0; len]];
    for k in 0..2 {
        advect(u, gu[k], &mut mom[k], -1.0);
        advect(b, gb[k], &mut mom[k], 1.0);
        advect(u, gb[k], &mut ind[k], -1.0);
        advect(b, gu[k], &mut ind[k], 1.0);
    }
    let [m1, m2] = mom;
    let [i1, i2] = ind;
    let real = |data: Vec<f64>| {
        RealField::from_samples(&grid, data)
            .map_err(|_| Error::NonFinite("primitive nonlinear product".into()))
    };
    let (m1, m2, i1, i2) = (real(m1)?, real(m2)?, real(i1)?, real(i2)?);
    let (m1, m2) = forward_pair(&m1, &m2)?;
    let (i1, i2) = forward_pair(&i1, &i2)?;
    let mut parts = [m1, m2, i1, i2];
    for p in parts.iter_mut() {
        dealias_in_place(p);
    }
    let [m1, m2, i1, i2] = parts;
    let [mut du1, mut du2] = leray_project(&m1, &m2)?;
    let [mut db1, mut db2] = leray_project(&i1, &i2)?;
    if config.nu > 0.0 {
        du1 = du1.sub(&fractional_laplacian(u1, config.alpha)?.scale(config.nu))?;
        du2 = du2.sub(&fractional_laplacian(u2, config.alpha)?.scale(config.nu))?;
    }
    if config.eta > 0.0 {
        db1 = db1.sub(&fractional_laplacian(b1, config.beta)?.scale(config.eta))?;
        db2 = db2.sub(&fractional_laplacian(b2, config.beta)?.scale(config.eta))?;
    }
    Ok(PrimitiveState { u: [du1, du2], b: [db1, db2] })
}
