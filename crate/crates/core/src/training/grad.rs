//! Analytic factor gradients and the finite-difference oracle.

use crate::adapters::{AdapterState, LokrBlock};
use crate::error::{Error, Result};
use crate::kron::unvec;
use crate::matrix::{DenseMatrix, DenseVector};

/// Gradients for each factor, in the state's canonical factor order.
pub type FactorGrads = Vec<DenseMatrix>;

/// Gradients of `L = upstreamᵀ · (ΔW · x)` with respect to every factor.
///
/// For KronA, with `X = unvec(x, b₂, a₂)` and `G = unvec(upstream, b₁, a₁)`,
/// `ΔW·x = s · vec(B X Aᵀ)` gives `∂L/∂A = s · Gᵀ B X` and `∂L/∂B = s · G A Xᵀ`.
pub fn adapter_gradients(
    state: &AdapterState,
    x: &DenseVector,
    upstream: &DenseVector,
) -> Result<FactorGrads> {
    if x.len() != state.h() || upstream.len() != state.d() {
        return Err(Error::DimensionMismatch(format!(
            "gradient inputs: x len {} (want {}), upstream len {} (want {})",
            x.len(),
            state.h(),
            upstream.len(),
            state.d()
        )));
    }
    let s = state.scale();
    match state {
        AdapterState::Krona(k) => {
            let (da, db) = kron_factor_grads(k.a(), k.b(), x, upstream)?;
            Ok(vec![da.scaled(s), db.scaled(s)])
        }
        AdapterState::Lora(l) => {
            let bx = l.b().matvec(x)?;
            let at_g = l.a().transpose_matvec(upstream)?;
            Ok(vec![
                DenseMatrix::outer(upstream, &bx).scaled(s),
                DenseMatrix::outer(&at_g, x).scaled(s),
            ])
        }
        AdapterState::Lokr(k) => match k.second() {
            LokrBlock::Full(m) => {
                let (da, dm) = kron_factor_grads(k.a(), m, x, upstream)?;
                Ok(vec![da.scaled(s), dm.scaled(s)])
            }
            LokrBlock::LowRank { b, c } => {
                let (da, dm) = kron_factor_grads(k.a(), &b.matmul(c)?, x, upstream)?;
                let db = dm.matmul(&c.transpose())?;
                let dc = b.transpose().matmul(&dm)?;
                Ok(vec![da.scaled(s), db.scaled(s), dc.scaled(s)])
            }
        },
        AdapterState::Loha(l) => {
            let [a, b, c, d] = l.factors();
            let (p, q) = (a.matmul(b)?, c.matmul(d)?);
            let e = DenseMatrix::outer(upstream, x).scaled(s);
            let dp = e.hadamard(&q)?;
            let dq = e.hadamard(&p)?;
            Ok(vec![
                dp.matmul(&b.transpose())?,
                a.transpose().matmul(&dp)?,
                dq.matmul(&d.transpose())?,
                c.transpose().matmul(&dq)?,
            ])
        }
    }
}

/// Unscaled `(∂L/∂A, ∂L/∂B)` for `L = upstreamᵀ (A ⊗ B) x`.
fn kron_factor_grads(
    a: &DenseMatrix,
    b: &DenseMatrix,
    x: &DenseVector,
    upstream: &DenseVector,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let (a1, a2) = a.shape();
    let (b1, b2) = b.shape();
    let xm = unvec(x, b2, a2)?;
    let g = unvec(upstream, b1, a1)?;
    let da = g.transpose().matmul(b)?.matmul(&xm)?;
    let db = g.matmul(a)?.matmul(&xm.transpose())?;
    Ok((da, db))
}

/// Central differences `(L(p + h·eᵢ) − L(p − h·eᵢ)) / 2h` for every coordinate.
pub fn finite_diff_gradient(loss_fn: impl Fn(&[f64]) -> f64, params: &[f64], step: f64) -> Vec<f64> {
    assert!(step > 0.0, "finite-difference step must be positive");
    let mut p = params.to_vec();
    (0..p.len())
        .map(|i| {
            let orig = p[i];
            p[i] = orig + step;
            let up = loss_fn(&p);
            p[i] = orig - step;
            let down = loss_fn(&p);
            p[i] = orig;
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// `‖a − b‖₂ / (‖a‖₂ + ‖b‖₂)`, zero when both are zero.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let norm = |v: &mut dyn Iterator<Item = f64>| v.map(|x| x * x).sum::<f64>().sqrt();
    let diff = norm(&mut a.iter().zip(b).map(|(x, y)| x - y));
    let denom = norm(&mut a.iter().copied()) + norm(&mut b.iter().copied());
    if denom == 0.0 {
        0.0
    } else {
        diff / denom
    }
}

/// Flattens factors (column-major, canonical order) into one parameter vector.
pub fn flatten_factors(factors: &[&DenseMatrix]) -> Vec<f64> {
    factors.iter().flat_map(|f| f.data().iter().copied()).collect()
}

/// Writes a flat parameter vector back into `state`'s factors.
pub fn load_flat_params(state: &mut AdapterState, params: &[f64]) {
    let mut offset = 0;
    for slot in state.factor_data_mut() {
        let n = slot.len();
        slot.copy_from_slice(&params[offset..offset + n]);
        offset += n;
    }
    assert_eq!(offset, params.len(), "parameter vector length mismatch");
}

/// Finite-difference gradients of `upstreamᵀ (ΔW x)` over all factors of `state`.
pub fn adapter_gradients_fd(
    state: &AdapterState,
    x: &DenseVector,
    upstream: &DenseVector,
    step: f64,
) -> Vec<f64> {
    let params = flatten_factors(&state.factors());
    let loss = |p: &[f64]| {
        let mut probe = state.clone();
        load_flat_params(&mut probe, p);
        probe
            .delta_weight()
            .matvec(x)
            .expect("shape checked by caller")
            .dot(upstream)
    };
    finite_diff_gradient(loss, &params, step)
}
