//! Matrix Grassmannians over ℝ, ℂ and ℍ: Haar frames, principal angles and
//! the determinant kernels, plus Monte-Carlo symbol estimates.
//!
//! Every frame is stored as a complex matrix. Over ℍ an `n × r` matrix
//! `Z + Wj` is stored as its `2n × 2r` embedding `[[Z, W], [−W̄, Z̄]]`.

mod mc;

pub use mc::{knapp_stein_kernel_check, mc_symbol, mc_symbols, KsKernelReport, McCell, McEstimate, KS_KERNEL_TOL};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rootsystem::Field;

pub type CMatrix = DMatrix<Complex64>;

/// Complex rows (or columns) used to store `k` entries over `field`.
fn embed(field: Field, k: usize) -> usize {
    match field {
        Field::H => 2 * k,
        _ => k,
    }
}

/// `[a; b] ↦ [−b̄; ā]`, the partner column of a quaternionic column.
fn j_partner(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len() / 2;
    v[n..].iter().map(|z| -z.conj()).chain(v[..n].iter().map(|z| z.conj())).collect()
}

fn dot(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal columns over a field, built column by column.
#[derive(Debug, Clone)]
struct Basis {
    field: Field,
    cols: Vec<Vec<Complex64>>,
}

impl Basis {
    fn new(field: Field) -> Self {
        Basis { field, cols: Vec::new() }
    }

    fn residual(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut v = v.to_vec();
        for _ in 0..2 {
            for c in &self.cols {
                let p = dot(c, &v);
                for (x, y) in v.iter_mut().zip(c) {
                    *x -= p * y;
                }
            }
        }
        v
    }

    /// Adds `v` (and its partner over ℍ) after projecting out the current span.
    fn push(&mut self, v: &[Complex64]) -> Result<()> {
        let mut w = self.residual(v);
        let s = norm(&w);
        if s < 1e-12 * norm(v).max(1e-300) {
            return Err(Error::Internal("rank-deficient frame".into()));
        }
        w.iter_mut().for_each(|x| *x /= s);
        if self.field == Field::H {
            let p = j_partner(&w);
            self.cols.push(w);
            self.cols.push(p);
        } else {
            self.cols.push(w);
        }
        Ok(())
    }

    /// Columns in embedding order: first halves, then partners.
    fn into_matrix(self, rows: usize) -> CMatrix {
        let k = self.cols.len();
        let order: Vec<usize> = match self.field {
            Field::H => (0..k / 2).map(|j| 2 * j).chain((0..k / 2).map(|j| 2 * j + 1)).collect(),
            _ => (0..k).collect(),
        };
        CMatrix::from_fn(rows, k, |i, j| self.cols[order[j]][i])
    }
}

/// An orthonormal frame `x ∈ 𝕂^{n×r}`, `x*x = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelFrame {
    field: Field,
    n: usize,
    r: usize,
    entries: CMatrix,
}

impl StiefelFrame {
    /// Orthonormalizes the columns of `m`; over ℍ `m` holds the first block
    /// column `[Z; −W̄]` of the embedding (`2n × r`).
    pub fn orthonormalize(field: Field, m: &CMatrix) -> Result<Self> {
        let rows = m.nrows();
        let n = match field {
            Field::H => rows / 2,
            _ => rows,
        };
        if field == Field::H && rows % 2 == 1 {
            return Err(Error::DimensionMismatch("quaternionic columns need an even row count".into()));
        }
        if field == Field::R && m.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidParameter("real frame with complex entries".into()));
        }
        let r = m.ncols();
        if r > n {
            return Err(Error::DimensionMismatch(format!("{r} columns in dimension {n}")));
        }
        let mut basis = Basis::new(field);
        for j in 0..r {
            basis.push(m.column(j).as_slice())?;
        }
        Ok(StiefelFrame {
            field,
            n,
            r,
            entries: basis.into_matrix(rows),
        })
    }

    /// The base point `x₀ = [I_r; 0]`.
    pub fn base_point(field: Field, n: usize, r: usize) -> Result<Self> {
        let rows = embed(field, n);
        let m = CMatrix::from_fn(rows, r, |i, j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::default() });
        Self::orthonormalize(field, &m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Complex entries, embedded over ℍ.
    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// `‖x*x − I‖_F`
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.entries.adjoint() * &self.entries;
        (g - CMatrix::identity(self.entries.ncols(), self.entries.ncols())).norm()
    }

    /// Left multiplication by a frame with `r = n` (a unitary over `𝕂`).
    pub fn left_mul(&self, g: &StiefelFrame) -> Result<Self> {
        if g.field != self.field || g.n != self.n || g.r != self.n {
            return Err(Error::DimensionMismatch("left factor must be a unitary of matching size".into()));
        }
        Ok(StiefelFrame {
            entries: &g.entries * &self.entries,
            ..self.clone()
        })
    }

    /// Orthonormal frame of the orthogonal complement, by greedy completion
    /// from the standard basis.
    pub fn complement(&self) -> Result<Self> {
        let rows = self.entries.nrows();
        let mut basis = Basis::new(self.field);
        basis.cols = match self.field {
            Field::H => (0..self.r)
                .flat_map(|j| {
                    [
                        self.entries.column(j).as_slice().to_vec(),
                        self.entries.column(self.r + j).as_slice().to_vec(),
                    ]
                })
                .collect(),
            _ => (0..self.r).map(|j| self.entries.column(j).as_slice().to_vec()).collect(),
        };
        let own = basis.cols.len();
        let candidates: Vec<Vec<Complex64>> = (0..self.n)
            .map(|i| (0..rows).map(|k| Complex64::new((k == i) as u8 as f64, 0.0)).collect())
            .collect();
        for _ in self.r..self.n {
            let best = candidates
                .iter()
                .max_by(|a, b| norm(&basis.residual(a)).total_cmp(&norm(&basis.residual(b))))
                .expect("nonempty");
            basis.push(best)?;
        }
        let mut done = Basis::new(self.field);
        done.cols = basis.cols.split_off(own);
        Ok(StiefelFrame {
            field: self.field,
            n: self.n,
            r: self.n - self.r,
            entries: done.into_matrix(rows),
        })
    }
}

/// Gaussian sample orthonormalized with the positive-diagonal convention.
pub fn haar_frame_from(rng: &mut impl Rng, field: Field, n: usize, r: usize) -> Result<StiefelFrame> {
    if r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= n, got n = {n}, r = {r}")));
    }
    let rows = embed(field, n);
    let mut m = CMatrix::zeros(rows, r);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..r {
        match field {
            Field::R => {
                for i in 0..n {
                    m[(i, j)] = Complex64::new(rng.sample(StandardNormal), 0.0);
                }
            }
            Field::C => {
                for i in 0..n {
                    m[(i, j)] = Complex64::new(rng.sample::<f64, _>(StandardNormal) * s, rng.sample::<f64, _>(StandardNormal) * s);
                }
            }
            Field::H => {
                // column [z; −w̄] of the embedding
                for i in 0..n {
                    let z = Complex64::new(rng.sample::<f64, _>(StandardNormal) * 0.5, rng.sample::<f64, _>(StandardNormal) * 0.5);
                    let w = Complex64::new(rng.sample::<f64, _>(StandardNormal) * 0.5, rng.sample::<f64, _>(StandardNormal) * 0.5);
                    m[(i, j)] = z;
                    m[(n + i, j)] = -w.conj();
                }
            }
        }
    }
    StiefelFrame::orthonormalize(field, &m)
}

pub fn haar_frame(field: Field, n: usize, r: usize, seed: u64) -> Result<StiefelFrame> {
    haar_frame_from(&mut ChaCha8Rng::seed_from_u64(seed), field, n, r)
}

fn check_pair(x: &StiefelFrame, y: &StiefelFrame) -> Result<()> {
    if x.field != y.field || x.n != y.n {
        return Err(Error::DimensionMismatch(format!(
            "frames over {} in dimension {} and {} in dimension {}",
            x.field, x.n, y.field, y.n
        )));
    }
    Ok(())
}

/// `det_ℝ` of a square matrix over `𝕂` from the determinant of its complex form.
pub fn det_real(field: Field, m: &CMatrix) -> Result<f64> {
    let d = m.clone().determinant();
    Ok(match field {
        Field::R => d.re.abs(),
        Field::C => d.norm_sqr(),
        Field::H => {
            if d.re < -1e-9 * d.norm().max(1e-300) || d.im.abs() > 1e-9 * d.norm().max(1e-300) + 1e-300 {
                return Err(Error::Internal(format!(
                    "quaternionic determinant {d} is not a nonnegative real"
                )));
            }
            d.re.max(0.0) * d.re.max(0.0)
        }
    })
}

/// `|Cos(ξ, η)| = det_ℝ(x*yy*x)^{1/(2a)}` with `x` the smaller frame.
pub fn cos_angle(x: &StiefelFrame, y: &StiefelFrame) -> Result<f64> {
    check_pair(x, y)?;
    let (small, large) = if x.r <= y.r { (x, y) } else { (y, x) };
    let g = large.entries.adjoint() * &small.entries;
    let d = det_real(x.field, &(g.adjoint() * &g))?;
    Ok(d.powf(1.0 / (2.0 * x.field.a() as f64)).min(1.0))
}

/// `|Sin(ξ, η)| = |Cos(ξ, η^⊥)|`
pub fn sin_angle(x: &StiefelFrame, y: &StiefelFrame) -> Result<f64> {
    check_pair(x, y)?;
    if x.r + y.r > x.n {
        return sin_angle(&x.complement()?, &y.complement()?);
    }
    cos_angle(x, &y.complement()?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleVector(pub Vec<f64>);

impl AngleVector {
    pub fn angles(&self) -> &[f64] {
        &self.0
    }
}

/// `t_j = arccos σ_j` from the singular values of `x*y`, ascending.
pub fn principal_angles(x: &StiefelFrame, y: &StiefelFrame) -> Result<AngleVector> {
    check_pair(x, y)?;
    if x.r != y.r {
        return Err(Error::DimensionMismatch(format!("frames of rank {} and {}", x.r, y.r)));
    }
    let g = x.entries.adjoint() * &y.entries;
    Ok(AngleVector(angles_from_gram(x.field, g)?))
}

pub(crate) fn angles_from_gram(field: Field, g: CMatrix) -> Result<Vec<f64>> {
    let mut s: Vec<f64> = g.singular_values().iter().map(|v| v.clamp(0.0, 1.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    if field == Field::H {
        for p in s.chunks(2) {
            if (p[0] - p[1]).abs() > 1e-8 {
                return Err(Error::Internal(format!(
                    "quaternionic singular values {} and {} are not paired",
                    p[0], p[1]
                )));
            }
        }
        s = s.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    }
    Ok(s.into_iter().map(f64::acos).collect())
}
