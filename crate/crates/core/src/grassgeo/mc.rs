use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{angles_from_gram, det_real, haar_frame_from, sin_angle, CMatrix, StiefelFrame};
use crate::error::{Error, Result};
use crate::jacobi::jacobi_polynomial;
use crate::param::Param;
use crate::rootsystem::{grassmannian_preset, Field, RootSystemBC, Weight};
use crate::spectra::{cosine_symbol, sine_symbol, TransformKind};
use num_complex::Complex64;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McCell {
    pub nu: Param,
    pub kind: TransformKind,
    pub m: Weight,
}

#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub cell: McCell,
    /// `Σ K^{2ν} φ_m / Σ K^{2ν}`
    pub estimate: f64,
    /// Delta-method standard error of the ratio.
    pub stderr: f64,
    pub samples: usize,
    /// Closed-form `c_ν(m)/N_ν` or `s_ν(m)/N′_ν`.
    pub target: f64,
    /// `(estimate − target)/stderr`, zero when both agree exactly.
    pub z: f64,
}

#[derive(Clone, Copy, Default)]
struct Acc {
    sum: f64,
    comp: f64,
}

impl Acc {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Per cell: `Σw, Σwf, Σw², Σw²f, Σw²f²` with `w = K^{2ν}`, `f = φ_m`.
type Sums = Vec<[Acc; 5]>;

fn validate_cells(cells: &[McCell], r: usize) -> Result<()> {
    for c in cells {
        if !matches!(c.kind, TransformKind::Cosine | TransformKind::Sine) {
            return Err(Error::InvalidParameter(format!("Monte Carlo covers cosine and sine, not {}", c.kind)));
        }
        if c.nu.is_negative() {
            return Err(Error::InvalidParameter(format!("nu = {} must be nonnegative", c.nu)));
        }
        c.m.require_even()?;
        if c.m.rank() != r {
            return Err(Error::DimensionMismatch(format!("weight {} does not have rank {r}", c.m)));
        }
    }
    Ok(())
}

/// Ratio estimates of `c_ν(m)/N_ν` and `s_ν(m)/N′_ν` over Haar samples of
/// `G_{n,r}(𝕂)`, with `φ_m` taken from `rs`. Sample chunks use independent
/// substreams of one seed; the result does not depend on the thread count.
pub fn mc_symbols(
    field: Field,
    n: usize,
    r: usize,
    rs: &RootSystemBC,
    cells: &[McCell],
    samples: usize,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    if 2 * r > n {
        return Err(Error::InvalidParameter(format!(
            "G({n},{r}) violates the convention 2r <= n"
        )));
    }
    if rs.rank() != r {
        return Err(Error::DimensionMismatch(format!("root system rank {} for r = {r}", rs.rank())));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    validate_cells(cells, r)?;
    let mut index: BTreeMap<Weight, usize> = BTreeMap::new();
    for c in cells {
        let k = index.len();
        index.entry(c.m.clone()).or_insert(k);
    }
    let mut evals = vec![None; index.len()];
    for (w, &i) in &index {
        evals[i] = Some(jacobi_polynomial(rs, w)?.evaluator());
    }
    let evals: Vec<_> = evals.into_iter().map(|e| e.expect("filled")).collect();
    let cell_weight: Vec<usize> = cells.iter().map(|c| index[&c.m]).collect();
    let nus: Vec<f64> = cells.iter().map(|c| c.nu.to_f64()).collect();
    let rows: Vec<usize> = match field {
        Field::H => (0..r).chain(n..n + r).collect(),
        _ => (0..r).collect(),
    };
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<Result<Sums>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut sums: Sums = vec![[Acc::default(); 5]; cells.len()];
            let mut table = Vec::new();
            let mut phi = vec![0.0; evals.len()];
            for _ in 0..count {
                let x = haar_frame_from(&mut rng, field, n, r)?;
                let e = x.entries();
                let g = CMatrix::from_fn(rows.len(), e.ncols(), |i, j| e[(rows[i], j)]);
                let t = angles_from_gram(field, g)?;
                let kc: f64 = t.iter().map(|x| x.cos()).product();
                let ks: f64 = t.iter().map(|x| x.sin()).product();
                for (p, ev) in phi.iter_mut().zip(&evals) {
                    *p = ev.eval_with(&t, &mut table);
                }
                for (k, cell) in cells.iter().enumerate() {
                    let base = if cell.kind == TransformKind::Cosine { kc } else { ks };
                    let w = base.powf(2.0 * nus[k]);
                    let f = phi[cell_weight[k]];
                    let s = &mut sums[k];
                    s[0].add(w);
                    s[1].add(w * f);
                    s[2].add(w * w);
                    s[3].add(w * w * f);
                    s[4].add(w * w * f * f);
                }
            }
            Ok(sums)
        })
        .collect();
    let mut total: Sums = vec![[Acc::default(); 5]; cells.len()];
    for p in partial {
        for (t, s) in total.iter_mut().zip(p?) {
            for (a, b) in t.iter_mut().zip(s) {
                a.add(b.value());
            }
        }
    }
    cells
        .iter()
        .zip(total)
        .map(|(cell, s)| {
            let [sw, swf, sww, swwf, swwff] = s.map(|a| a.value());
            let est = swf / sw;
            let resid = (swwff - 2.0 * est * swwf + est * est * sww).max(0.0);
            let nf = samples as f64;
            let stderr = (resid * nf / (nf - 1.0)).sqrt() / sw;
            let symbol = match cell.kind {
                TransformKind::Cosine => cosine_symbol(rs, &cell.nu, &cell.m)?,
                _ => sine_symbol(rs, &cell.nu, &cell.m)?,
            };
            let target = symbol.ratio_f64();
            let z = if est == target { 0.0 } else { (est - target) / stderr };
            Ok(McEstimate {
                cell: cell.clone(),
                estimate: est,
                stderr,
                samples,
                target,
                z,
            })
        })
        .collect()
}

/// One cell on the default Grassmannian preset.
#[allow(clippy::too_many_arguments)]
pub fn mc_symbol(
    field: Field,
    n: usize,
    r: usize,
    nu: &Param,
    kind: TransformKind,
    m: &Weight,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    let rs = grassmannian_preset(field, n, r)?;
    let cell = McCell {
        nu: nu.clone(),
        kind,
        m: m.clone(),
    };
    Ok(mc_symbols(field, n, r, &rs, &[cell], samples, seed)?.remove(0))
}

#[derive(Debug, Clone, Serialize)]
pub struct KsKernelReport {
    pub field: Field,
    pub r: usize,
    pub t: Param,
    pub samples: usize,
    /// Worst relative gap in `|Sin(ξ₀, η)|^a = |det_ℝ Y| / det_ℝ(1 + Y*Y)^{1/2}`.
    pub max_kernel_rel: f64,
    /// Worst relative gap in `δ_t(p(n_Y)) = det_ℝ(1 + Y*Y)^t`.
    pub max_jacobian_rel: f64,
    pub pass: bool,
}

pub const KS_KERNEL_TOL: f64 = 1e-9;

/// `Y` over `𝕂` as a square complex matrix (embedded over ℍ).
fn gaussian_square(rng: &mut impl Rng, field: Field, r: usize) -> CMatrix {
    let mut g = || rng.sample::<f64, _>(StandardNormal);
    match field {
        Field::R => CMatrix::from_fn(r, r, |_, _| Complex64::new(g(), 0.0)),
        Field::C => CMatrix::from_fn(r, r, |_, _| Complex64::new(g(), g())),
        Field::H => {
            let z = CMatrix::from_fn(r, r, |_, _| Complex64::new(g(), g()));
            let w = CMatrix::from_fn(r, r, |_, _| Complex64::new(g(), g()));
            embed_quaternion(&z, &w)
        }
    }
}

fn embed_quaternion(z: &CMatrix, w: &CMatrix) -> CMatrix {
    let (p, q) = z.shape();
    CMatrix::from_fn(2 * p, 2 * q, |i, j| match (i < p, j < q) {
        (true, true) => z[(i, j)],
        (true, false) => w[(i, j - q)],
        (false, true) => -w[(i - p, j)].conj(),
        (false, false) => z[(i - p, j - q)].conj(),
    })
}

/// `η = {v ⊕ Yv}` as a frame in `𝕂^{2r}`, together with `A = η*[I; Y]`,
/// the triangular factor of `[I; Y] = ηA`.
pub(crate) fn graph_frame(field: Field, r: usize, y: &CMatrix) -> Result<(StiefelFrame, CMatrix)> {
    let k = y.ncols();
    let stacked = CMatrix::from_fn(2 * k, k, |i, j| {
        if i < k {
            Complex64::new((i == j) as u8 as f64, 0.0)
        } else {
            y[(i - k, j)]
        }
    });
    let full = match field {
        // [I; E(Y)] reordered into the embedding of the quaternionic [I; Y]
        Field::H => {
            let src = |i: usize| match i {
                i if i < r => i,
                i if i < 2 * r => i + r,
                i if i < 3 * r => i - r,
                i => i,
            };
            CMatrix::from_fn(4 * r, 2 * r, |i, j| stacked[(src(i), j)])
        }
        _ => stacked,
    };
    let first = full.columns(0, r).into_owned();
    let frame = StiefelFrame::orthonormalize(field, &first)?;
    let a = frame.entries().adjoint() * full;
    Ok((frame, a))
}

pub fn knapp_stein_kernel_check(field: Field, r: usize, t: &Param, samples: usize, seed: u64) -> Result<KsKernelReport> {
    if r == 0 {
        return Err(Error::InvalidParameter("rank must be positive".into()));
    }
    let a = field.a() as f64;
    let s = t.to_f64();
    let x0 = StiefelFrame::base_point(field, 2 * r, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_kernel: f64 = 0.0;
    let mut max_jac: f64 = 0.0;
    for _ in 0..samples {
        let y = gaussian_square(&mut rng, field, r);
        let (eta, tri) = graph_frame(field, r, &y)?;
        let k = y.ncols();
        let gram = CMatrix::identity(k, k) + y.adjoint() * &y;
        let det_gram = det_real(field, &gram)?;
        let lhs = sin_angle(&x0, &eta)?.powf(a);
        let rhs = det_real(field, &y)? / det_gram.sqrt();
        max_kernel = max_kernel.max((lhs - rhs).abs() / rhs);
        let c = if field == Field::R { 1 } else { 2 };
        let det_a: f64 = (0..k).map(|i| tri[(i, i)].norm().powi(c)).product();
        let jac = det_a.powf(2.0 * s);
        let expect = det_gram.powf(s);
        max_jac = max_jac.max((jac - expect).abs() / expect);
    }
    Ok(KsKernelReport {
        field,
        r,
        t: t.clone(),
        samples,
        max_kernel_rel: max_kernel,
        max_jacobian_rel: max_jac,
        pass: max_kernel <= KS_KERNEL_TOL && max_jac <= KS_KERNEL_TOL,
    })
}
