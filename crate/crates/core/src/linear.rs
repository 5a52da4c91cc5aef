//! Linear stochastic ITs `x ↦ Ax + e`, `e ~ (0, Σ)`, between real
//! coordinate spaces. Objects are dimensions; a distribution is an IT from
//! the 0-dimensional space, i.e. a covariance.
//!
//! Conditionals use the Moore–Penrose pseudoinverse, and informativeness
//! classes are pairs `⟨Q, S⟩`: the observable subspace `Q = range(Aᵀ)` and
//! the covariance `S` of the best linear unbiased estimate of the
//! coordinates of `x` in `Q`.

use std::fmt;

use nalgebra::{DMatrix, RowDVector, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Accuracy, CategoryTag, ItCategory, SampleMorphisms, Side};

pub const LINEAR_TOL: f64 = 1e-9;
/// Singular values below `PINV_CUTOFF × σ_max` are treated as zero.
pub const PINV_CUTOFF: f64 = 1e-10;

/// Thin SVD `m = U diag(s) Vᵀ` over the positive singular values, largest
/// first. Computed from the eigenpairs `(u; v)/√2` of the symmetric dilation
/// `[[0, m], [mᵀ, 0]]`, whose eigenvalues are `±s`; nalgebra's own SVD loses
/// accuracy on rank-deficient inputs.
fn thin_svd(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (r, c) = (m.nrows(), m.ncols());
    if m.is_empty() {
        return (DMatrix::zeros(r, 0), vec![], DMatrix::zeros(c, 0));
    }
    let mut dilation = DMatrix::zeros(r + c, r + c);
    dilation.view_mut((0, r), (r, c)).copy_from(m);
    dilation.view_mut((r, 0), (c, r)).copy_from(&m.transpose());
    let eig = SymmetricEigen::new(dilation);
    let mut order: Vec<usize> = (0..r + c).filter(|&i| eig.eigenvalues[i] > 0.0).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    order.truncate(r.min(c));
    let scale = std::f64::consts::SQRT_2;
    let u = DMatrix::from_fn(r, order.len(), |i, j| {
        eig.eigenvectors[(i, order[j])] * scale
    });
    let v = DMatrix::from_fn(c, order.len(), |i, j| {
        eig.eigenvectors[(r + i, order[j])] * scale
    });
    (u, order.iter().map(|&i| eig.eigenvalues[i]).collect(), v)
}

fn largest_singular_value(m: &DMatrix<f64>) -> f64 {
    thin_svd(m).1.first().copied().unwrap_or(0.0)
}

pub fn pinv(m: &DMatrix<f64>) -> DMatrix<f64> {
    pinv_above(m, PINV_CUTOFF * largest_singular_value(m))
}

/// Pseudoinverse treating singular values `≤ cutoff` as zero.
fn pinv_above(m: &DMatrix<f64>, cutoff: f64) -> DMatrix<f64> {
    let (u, s, v) = thin_svd(m);
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for (k, &sk) in s.iter().enumerate() {
        if sk > cutoff {
            out += v.column(k) * u.column(k).transpose() / sk;
        }
    }
    out
}

/// Orthonormal basis (as columns) of the range of `m`.
pub fn range_basis(m: &DMatrix<f64>) -> DMatrix<f64> {
    range_basis_above(m, PINV_CUTOFF * largest_singular_value(m))
}

fn range_basis_above(m: &DMatrix<f64>, cutoff: f64) -> DMatrix<f64> {
    let (u, s, _) = thin_svd(m);
    let keep = s.iter().take_while(|&&sk| sk > cutoff).count();
    u.columns(0, keep).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `r` (an `n × k` matrix).
pub fn complement_basis(r: &DMatrix<f64>) -> DMatrix<f64> {
    let n = r.nrows();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let eig = SymmetricEigen::new(DMatrix::identity(n, n) - r * r.transpose());
    let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
    DMatrix::from_fn(n, keep.len(), |row, c| eig.eigenvectors[(row, keep[c])])
}

pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    SymmetricEigen::new(symmetrize(m)).eigenvalues.min()
}

/// Symmetric to `LINEAR_TOL` with smallest eigenvalue `≥ −LINEAR_TOL`.
pub fn is_psd(m: &DMatrix<f64>) -> bool {
    m.is_square() && max_abs(&(m - m.transpose())) <= LINEAR_TOL && min_eigenvalue(m) >= -LINEAR_TOL
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn near(a: &DMatrix<f64>, b: &DMatrix<f64>) -> bool {
    a.shape() == b.shape() && max_abs(&(a - b)) <= LINEAR_TOL
}

/// `⟨A, Σ⟩`: gain `A` (target × source) and noise covariance `Σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearIt {
    gain: DMatrix<f64>,
    noise: DMatrix<f64>,
}

impl LinearIt {
    pub fn new(gain: DMatrix<f64>, noise: DMatrix<f64>) -> Result<Self> {
        if noise.nrows() != gain.nrows() || noise.ncols() != gain.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "gain is {}x{} but noise is {}x{}",
                gain.nrows(),
                gain.ncols(),
                noise.nrows(),
                noise.ncols()
            )));
        }
        if !is_psd(&noise) {
            return Err(Error::NotPsd(format!(
                "min eigenvalue {}",
                min_eigenvalue(&noise)
            )));
        }
        Ok(LinearIt { gain, noise })
    }

    pub fn deterministic(gain: DMatrix<f64>) -> Self {
        let m = gain.nrows();
        LinearIt {
            gain,
            noise: DMatrix::zeros(m, m),
        }
    }

    /// A distribution with covariance `sigma`.
    pub fn distribution(sigma: DMatrix<f64>) -> Result<Self> {
        LinearIt::new(DMatrix::zeros(sigma.nrows(), 0), sigma)
    }

    pub fn gain(&self) -> &DMatrix<f64> {
        &self.gain
    }

    pub fn noise(&self) -> &DMatrix<f64> {
        &self.noise
    }

    pub fn source_dim(&self) -> usize {
        self.gain.ncols()
    }

    pub fn target_dim(&self) -> usize {
        self.gain.nrows()
    }
}

/// The joint covariance blocks of a distribution on `F × G`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointCovariance {
    pub sigma_f: DMatrix<f64>,
    pub sigma_fg: DMatrix<f64>,
    pub sigma_g: DMatrix<f64>,
}

impl JointCovariance {
    pub fn split(sigma: &DMatrix<f64>, n: usize) -> Result<Self> {
        if !sigma.is_square() || sigma.nrows() < n {
            return Err(Error::DimensionMismatch(format!(
                "cannot split {:?} at {n}",
                sigma.shape()
            )));
        }
        let m = sigma.nrows() - n;
        Ok(JointCovariance {
            sigma_f: sigma.view((0, 0), (n, n)).into_owned(),
            sigma_fg: sigma.view((0, n), (n, m)).into_owned(),
            sigma_g: sigma.view((n, n), (m, m)).into_owned(),
        })
    }

    pub fn sigma_gf(&self) -> DMatrix<f64> {
        self.sigma_fg.transpose()
    }

    pub fn assemble(&self) -> DMatrix<f64> {
        let (n, m) = (self.sigma_f.nrows(), self.sigma_g.nrows());
        let mut out = DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(&self.sigma_f);
        out.view_mut((0, n), (n, m)).copy_from(&self.sigma_fg);
        out.view_mut((n, 0), (m, n)).copy_from(&self.sigma_gf());
        out.view_mut((n, n), (m, m)).copy_from(&self.sigma_g);
        out
    }
}

/// Blocks of `h = (i*a)∘f`: `Σ_fg = Σ_f Aᵀ`, `Σ_g = A Σ_f Aᵀ + Σ_a`.
pub fn generated_joint_blocks(sigma_f: &DMatrix<f64>, a: &LinearIt) -> Result<JointCovariance> {
    if a.source_dim() != sigma_f.nrows() {
        return Err(Error::DimensionMismatch(
            "prior and IT dimensions differ".into(),
        ));
    }
    Ok(JointCovariance {
        sigma_f: sigma_f.clone(),
        sigma_fg: sigma_f * a.gain.transpose(),
        sigma_g: &a.gain * sigma_f * a.gain.transpose() + &a.noise,
    })
}

/// `a = ⟨Σ_gf Σ_f⁺, Σ_g − Σ_gf Σ_f⁺ Σ_fg⟩` and `b = ⟨Σ_fg Σ_g⁺, Σ_f − Σ_fg Σ_g⁺ Σ_gf⟩`.
pub fn conditional_pair(joint: &JointCovariance) -> (LinearIt, LinearIt) {
    let gf = joint.sigma_gf();
    let ka = &gf * pinv(&joint.sigma_f);
    let na = symmetrize(&(&joint.sigma_g - &ka * &joint.sigma_fg));
    let kb = &joint.sigma_fg * pinv(&joint.sigma_g);
    let nb = symmetrize(&(&joint.sigma_f - &kb * &gf));
    (
        LinearIt {
            gain: ka,
            noise: na,
        },
        LinearIt {
            gain: kb,
            noise: nb,
        },
    )
}

/// The category of linear stochastic ITs.
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearCat;

impl ItCategory for LinearCat {
    type Object = usize;
    type Morphism = LinearIt;

    fn tag(&self) -> CategoryTag {
        CategoryTag::Linear
    }

    fn source(&self, m: &LinearIt) -> usize {
        m.source_dim()
    }

    fn target(&self, m: &LinearIt) -> usize {
        m.target_dim()
    }

    fn identity(&self, obj: &usize) -> LinearIt {
        LinearIt::deterministic(DMatrix::identity(*obj, *obj))
    }

    /// `⟨A_b A_a, A_b Σ_a A_bᵀ + Σ_b⟩`.
    fn compose(&self, after: &LinearIt, before: &LinearIt) -> Result<LinearIt> {
        if after.source_dim() != before.target_dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                after.source_dim(),
                after.target_dim(),
                before.source_dim(),
                before.target_dim()
            )));
        }
        Ok(LinearIt {
            gain: &after.gain * &before.gain,
            noise: symmetrize(
                &(&after.gain * &before.noise * after.gain.transpose() + &after.noise),
            ),
        })
    }

    fn terminal_object(&self) -> usize {
        0
    }

    fn terminal_morphism(&self, obj: &usize) -> LinearIt {
        LinearIt::deterministic(DMatrix::zeros(0, *obj))
    }

    fn product_object(&self, first: &usize, second: &usize) -> usize {
        first + second
    }

    fn projection_first(&self, first: &usize, second: &usize) -> LinearIt {
        LinearIt::deterministic(DMatrix::from_fn(*first, first + second, |r, c| {
            if r == c {
                1.0
            } else {
                0.0
            }
        }))
    }

    fn projection_second(&self, first: &usize, second: &usize) -> LinearIt {
        LinearIt::deterministic(DMatrix::from_fn(*second, first + second, |r, c| {
            if r + first == c {
                1.0
            } else {
                0.0
            }
        }))
    }

    /// Stacked gains, block-diagonal noise.
    fn product(&self, a: &LinearIt, b: &LinearIt) -> Result<LinearIt> {
        if a.source_dim() != b.source_dim() {
            return Err(Error::DimensionMismatch(
                "product factors need a common source".into(),
            ));
        }
        let (p, q, n) = (a.target_dim(), b.target_dim(), a.source_dim());
        let mut gain = DMatrix::zeros(p + q, n);
        gain.view_mut((0, 0), (p, n)).copy_from(&a.gain);
        gain.view_mut((p, 0), (q, n)).copy_from(&b.gain);
        let mut noise = DMatrix::zeros(p + q, p + q);
        noise.view_mut((0, 0), (p, p)).copy_from(&a.noise);
        noise.view_mut((p, p), (q, q)).copy_from(&b.noise);
        Ok(LinearIt { gain, noise })
    }

    fn is_deterministic(&self, m: &LinearIt) -> bool {
        max_abs(&m.noise) <= LINEAR_TOL
    }

    /// Equal gains and `Σ_a ≤ Σ_b` in the Loewner order.
    fn accuracy(&self, a: &LinearIt, b: &LinearIt) -> Result<Accuracy> {
        if a.gain.shape() != b.gain.shape() {
            return Err(Error::DimensionMismatch(
                "accuracy needs equal shapes".into(),
            ));
        }
        if !near(&a.gain, &b.gain) {
            return Ok(Accuracy::Incomparable);
        }
        let d = &b.noise - &a.noise;
        Ok(Accuracy::from_flags(is_psd(&d), is_psd(&(-d))))
    }

    fn approx_eq(&self, a: &LinearIt, b: &LinearIt) -> bool {
        near(&a.gain, &b.gain) && near(&a.noise, &b.noise)
    }

    fn conditional(
        &self,
        joint: &LinearIt,
        first: &usize,
        second: &usize,
        side: Side,
    ) -> Result<LinearIt> {
        if joint.source_dim() != 0 || joint.target_dim() != first + second {
            return Err(Error::DimensionMismatch(
                "joint must be a distribution on first × second".into(),
            ));
        }
        let (a, b) = conditional_pair(&JointCovariance::split(&joint.noise, *first)?);
        Ok(match side {
            Side::WrtFirst => a,
            Side::WrtSecond => b,
        })
    }
}

fn random_gain(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..=1.0))
}

/// A random PSD matrix `L Lᵀ` of random rank (possibly deficient).
pub fn random_psd(rng: &mut ChaCha8Rng, dim: usize) -> DMatrix<f64> {
    let rank = rng.gen_range(0..=dim);
    let l = random_gain(rng, dim, rank);
    symmetrize(&(&l * l.transpose()))
}

impl SampleMorphisms for LinearCat {
    fn random_object(&self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(1..=4)
    }

    fn random_morphism(&self, rng: &mut ChaCha8Rng, source: &usize, target: &usize) -> LinearIt {
        let gain = random_gain(rng, *target, *source);
        let noise = random_psd(rng, *target);
        LinearIt { gain, noise }
    }

    fn random_deterministic(
        &self,
        rng: &mut ChaCha8Rng,
        source: &usize,
        target: &usize,
    ) -> LinearIt {
        LinearIt::deterministic(random_gain(rng, *target, *source))
    }
}

/// An informativeness class `⟨Q, S⟩` of ITs out of an `n`-dimensional space.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoClass {
    /// Orthonormal basis of `Q` as columns (`n × k`).
    pub basis: DMatrix<f64>,
    /// Covariance of the best unbiased estimate of `basisᵀ x` (`k × k`).
    pub s: DMatrix<f64>,
}

impl InfoClass {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthogonal projector onto `Q`.
    pub fn projector(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    /// `S` as an operator on the ambient space; basis independent.
    pub fn operator(&self) -> DMatrix<f64> {
        &self.basis * &self.s * self.basis.transpose()
    }

    /// `self ⪰ other`: `Q₁ ⊇ Q₂` and `S₁` restricted to `Q₂` is `≤ S₂`.
    pub fn dominates(&self, other: &InfoClass) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let outside = &other.basis - self.projector() * &other.basis;
        if max_abs(&outside) > LINEAR_TOL {
            return false;
        }
        let t = other.basis.transpose() * &self.basis;
        is_psd(&symmetrize(&(&other.s - &t * &self.s * t.transpose())))
    }

    pub fn same_class(&self, other: &InfoClass) -> bool {
        near(&self.projector(), &other.projector()) && near(&self.operator(), &other.operator())
    }
}

impl fmt::Display for InfoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op: Vec<String> = matrix_rows(&self.operator())
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| format!("{v:.4}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(
            f,
            "<rank Q = {}, S = [{}]>",
            self.basis.ncols(),
            op.join("; ")
        )
    }
}

fn stack_rows(rows: &[RowDVector<f64>], ncols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), ncols, |r, c| rows[r][c])
}

/// The unbiased estimator `G` of `basisᵀ x` (so `G A = basisᵀ`) with least
/// covariance, and that covariance.
///
/// Noise directions with zero variance give exact observations `E x`; the
/// rest are whitened to `F x + e`, `e ~ (0, I)`. The exact part pins down
/// `x` up to `N = null(E)`, and least squares on the whitened rows resolves
/// the remaining coordinates `Nᵀ x`.
fn blue(a: &LinearIt, basis: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let (n, m, k) = (a.source_dim(), a.target_dim(), basis.ncols());
    let (mut exact, mut exact_dirs, mut noisy, mut noisy_dirs) = (vec![], vec![], vec![], vec![]);
    let eig = (m > 0).then(|| SymmetricEigen::new(symmetrize(&a.noise)));
    for eig in eig.iter() {
        let top = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        for i in 0..m {
            let v = eig.eigenvectors.column(i).transpose();
            let lambda = eig.eigenvalues[i];
            if lambda > PINV_CUTOFF * top {
                let w = v / lambda.sqrt();
                noisy.push(&w * &a.gain);
                noisy_dirs.push(w);
            } else {
                exact.push(&v * &a.gain);
                exact_dirs.push(v.into_owned());
            }
        }
    }
    let (e, vn) = (stack_rows(&exact, n), stack_rows(&exact_dirs, m));
    let (f, vr) = (stack_rows(&noisy, n), stack_rows(&noisy_dirs, m));
    // exact rows are unit combinations of the gain's rows, so judge their
    // rank on the gain's scale
    let cutoff = PINV_CUTOFF * largest_singular_value(&a.gain);
    let e_pinv = pinv_above(&e, cutoff);
    let null = complement_basis(&range_basis_above(&e.transpose(), cutoff));
    let w = basis.transpose() * &null;
    let h_pinv = pinv(&(&f * &null));
    let from_exact = &e_pinv * &vn;
    let g = basis.transpose() * &from_exact + &w * &h_pinv * (vr - &f * &from_exact);
    let s = if null.ncols() == 0 {
        DMatrix::zeros(k, k)
    } else {
        symmetrize(&(&w * &h_pinv * h_pinv.transpose() * w.transpose()))
    };
    (g, s)
}

pub fn info_class(a: &LinearIt) -> InfoClass {
    let basis = range_basis(&a.gain.transpose());
    let (_, s) = blue(a, &basis);
    InfoClass { basis, s }
}

/// A post-processing `c` with `c∘a = ⟨A_b, Σ_b⟩` when `a ⪰ b`.
pub fn informativeness_witness(a: &LinearIt, b: &LinearIt) -> Option<LinearIt> {
    let (ca, cb) = (info_class(a), info_class(b));
    if !ca.dominates(&cb) {
        return None;
    }
    let (g, _) = blue(a, &ca.basis);
    let c = &b.gain * &cb.basis * cb.basis.transpose() * &ca.basis * g;
    let noise = symmetrize(&(&b.noise - &c * &a.noise * c.transpose()));
    Some(LinearIt { gain: c, noise })
}

/// Wire form of a linear IT: nested row arrays with explicit dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRecord {
    pub source_dim: usize,
    pub target_dim: usize,
    pub gain: Vec<Vec<f64>>,
    pub noise: Vec<Vec<f64>>,
}

pub fn matrix_from_rows(rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<DMatrix<f64>> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::DimensionMismatch(format!(
            "expected a {nrows}x{ncols} matrix"
        )));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |r, c| rows[r][c]))
}

pub fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|r| m.row(r).iter().copied().collect())
        .collect()
}

impl From<&LinearIt> for LinearRecord {
    fn from(it: &LinearIt) -> Self {
        LinearRecord {
            source_dim: it.source_dim(),
            target_dim: it.target_dim(),
            gain: matrix_rows(&it.gain),
            noise: matrix_rows(&it.noise),
        }
    }
}

impl TryFrom<&LinearRecord> for LinearIt {
    type Error = Error;

    fn try_from(r: &LinearRecord) -> Result<Self> {
        LinearIt::new(
            matrix_from_rows(&r.gain, r.target_dim, r.source_dim)?,
            matrix_from_rows(&r.noise, r.target_dim, r.target_dim)?,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::axioms::verify_axioms;
    use crate::kernel::{checked_conditional, generated_joint};
    use rand::SeedableRng;

    fn m(rows: &[&[f64]]) -> DMatrix<f64> {
        let v: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
        matrix_from_rows(&v, v.len(), v.first().map_or(0, |r| r.len())).unwrap()
    }

    fn it(gain: &[&[f64]], noise: &[&[f64]]) -> LinearIt {
        LinearIt::new(m(gain), m(noise)).unwrap()
    }

    #[test]
    fn scalar_composition() {
        let a = it(&[&[1.0]], &[&[1.0]]);
        let b = it(&[&[2.0]], &[&[1.0]]);
        let c = LinearCat.compose(&b, &a).unwrap();
        assert_eq!(c.gain()[(0, 0)], 2.0);
        assert_eq!(c.noise()[(0, 0)], 5.0);
        assert!(LinearCat.approx_eq(&LinearCat.compose(&LinearCat.identity(&1), &a).unwrap(), &a));
    }

    /// Sample covariance of `b(a(0))` over many draws: noise only.
    #[test]
    fn scalar_composition_monte_carlo() {
        use rand_distr::{Distribution, Normal};
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let n = 200_000;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let y = 1.0 * 0.0 + normal.sample(&mut rng);
            let z: f64 = 2.0 * y + normal.sample(&mut rng);
            sum2 += z * z;
        }
        let var = sum2 / n as f64;
        // standard error of a variance estimate is σ²·sqrt(2/n)
        assert!((var - 5.0).abs() < 3.0 * 5.0 * (2.0 / n as f64).sqrt());
    }

    #[test]
    fn product_stacks_and_projects() {
        let a = it(&[&[1.0]], &[&[1.0]]);
        let b = it(&[&[2.0]], &[&[3.0]]);
        let p = LinearCat.product(&a, &b).unwrap();
        assert_eq!(p.gain(), &m(&[&[1.0], &[2.0]]));
        assert_eq!(p.noise(), &m(&[&[1.0, 0.0], &[0.0, 3.0]]));
        assert!(LinearCat.approx_eq(
            &LinearCat
                .compose(&LinearCat.projection_first(&1, &1), &p)
                .unwrap(),
            &a
        ));
        assert!(LinearCat.approx_eq(
            &LinearCat
                .compose(&LinearCat.projection_second(&1, &1), &p)
                .unwrap(),
            &b
        ));
        let t = LinearCat.terminal_morphism(&1);
        let pt = LinearCat.product(&a, &t).unwrap();
        assert!(LinearCat.approx_eq(&pt, &a));
    }

    #[test]
    fn generated_joint_example() {
        let f = LinearIt::distribution(m(&[&[1.0]])).unwrap();
        let a = it(&[&[1.0]], &[&[1.0]]);
        let h = generated_joint(&LinearCat, &f, &a).unwrap();
        assert!(near(h.noise(), &m(&[&[1.0, 1.0], &[1.0, 2.0]])));
        let blocks = generated_joint_blocks(f.noise(), &a).unwrap();
        assert!(near(&blocks.assemble(), h.noise()));
        let zero = generated_joint_blocks(&m(&[&[0.0]]), &a).unwrap();
        assert_eq!(zero.sigma_fg, m(&[&[0.0]]));
        assert_eq!(zero.sigma_g, m(&[&[1.0]]));
    }

    #[test]
    fn conditional_examples() {
        let h = LinearIt::distribution(m(&[&[1.0, 1.0], &[1.0, 2.0]])).unwrap();
        let (b, ok) = checked_conditional(&LinearCat, &h, &1, &1, Side::WrtSecond).unwrap();
        assert!(ok);
        assert!((b.gain()[(0, 0)] - 0.5).abs() < 1e-12);
        assert!((b.noise()[(0, 0)] - 0.5).abs() < 1e-12);
        let indep = LinearIt::distribution(m(&[&[2.0, 0.0], &[0.0, 3.0]])).unwrap();
        let a = LinearCat
            .conditional(&indep, &1, &1, Side::WrtFirst)
            .unwrap();
        assert_eq!(a.gain()[(0, 0)], 0.0);
        assert_eq!(a.noise()[(0, 0)], 3.0);
    }

    #[test]
    fn rank_deficient_prior_reconstructs() {
        let u = m(&[&[1.0], &[2.0]]);
        let sigma_f = &u * u.transpose();
        let f = LinearIt::distribution(sigma_f).unwrap();
        let a = it(&[&[0.5, -1.0]], &[&[0.2]]);
        let h = generated_joint(&LinearCat, &f, &a).unwrap();
        let (_, ok) = checked_conditional(&LinearCat, &h, &2, &1, Side::WrtFirst).unwrap();
        assert!(ok);
    }

    #[test]
    fn accuracy_examples() {
        let a = it(&[&[1.0]], &[&[1.0]]);
        let b = it(&[&[1.0]], &[&[2.0]]);
        assert_eq!(LinearCat.accuracy(&a, &a).unwrap(), Accuracy::Equal);
        assert_eq!(LinearCat.accuracy(&a, &b).unwrap(), Accuracy::MoreAccurate);
        let c = it(&[&[2.0]], &[&[1.0]]);
        assert_eq!(LinearCat.accuracy(&a, &c).unwrap(), Accuracy::Incomparable);
    }

    #[test]
    fn rejects_non_psd_noise() {
        assert!(matches!(
            LinearIt::new(m(&[&[1.0]]), m(&[&[-1.0]])),
            Err(Error::NotPsd(_))
        ));
        assert!(matches!(
            LinearIt::new(m(&[&[1.0]]), m(&[&[1.0, 0.0]])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn class_examples() {
        let id = info_class(&LinearCat.identity(&2));
        assert_eq!(id.basis.ncols(), 2);
        assert!(max_abs(&id.s) < 1e-12);
        let z = info_class(&LinearCat.terminal_morphism(&2));
        assert_eq!(z.basis.ncols(), 0);
        let e1 = info_class(&it(&[&[1.0, 0.0]], &[&[2.0]]));
        assert_eq!(e1.basis.ncols(), 1);
        assert!(near(&e1.operator(), &m(&[&[2.0, 0.0], &[0.0, 0.0]])));
        assert!(id.dominates(&e1) && !e1.dominates(&id));
        assert!(e1.dominates(&z) && !z.dominates(&e1));
    }

    #[test]
    fn class_is_invariant_under_invertible_post_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (n, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let a = LinearCat.random_morphism(&mut rng, &n, &k);
            let t = LinearIt::deterministic(
                random_gain(&mut rng, k, k) + DMatrix::identity(k, k) * 3.0,
            );
            let ta = LinearCat.compose(&t, &a).unwrap();
            assert!(info_class(&a).same_class(&info_class(&ta)));
        }
    }

    #[test]
    fn witness_reverifies_under_both_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let (n, k, j) = (
                rng.gen_range(1..=4),
                rng.gen_range(1..=4),
                rng.gen_range(1..=4),
            );
            let a = LinearCat.random_morphism(&mut rng, &n, &k);
            let post = LinearCat.random_morphism(&mut rng, &k, &j);
            let b = LinearCat.compose(&post, &a).unwrap();
            let c = informativeness_witness(&a, &b).expect("a ⪰ post∘a");
            assert!(is_psd(c.noise()), "{c:?}");
            let ca = LinearCat.compose(&c, &a).unwrap();
            assert!(LinearCat.approx_eq(&ca, &b));
            assert!(LinearCat.accuracy(&ca, &b).unwrap().at_least());
        }
    }

    #[test]
    fn thin_svd_reconstructs_rank_deficient_inputs() {
        // nalgebra's bidiagonal SVD reconstructs this one with error ~0.09
        let h = m(&[
            &[-0.24500008267712242, -0.47566557388818065],
            &[-0.2351560675675734, -0.4565535023930122],
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut cases = vec![h];
        for _ in 0..2000 {
            let (r, c, k) = (
                rng.gen_range(1..=5),
                rng.gen_range(1..=5),
                rng.gen_range(1..=3),
            );
            cases.push(random_gain(&mut rng, r, k) * random_gain(&mut rng, k, c));
        }
        for a in &cases {
            let (u, s, v) = thin_svd(a);
            let rebuilt =
                &u * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s)) * v.transpose();
            assert!(max_abs(&(rebuilt - a)) <= 1e-12);
            let p = pinv(a);
            assert!(max_abs(&(a * &p * a - a)) <= 1e-9);
            assert!(max_abs(&(&p * a * &p - &p)) <= 1e-9 * (1.0 + max_abs(&p)));
        }
    }

    #[test]
    fn class_covariance_matches_information_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..200 {
            let (n, k) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let gain = random_gain(&mut rng, k, n);
            let root = random_gain(&mut rng, k, k);
            let noise = &root * root.transpose() + DMatrix::identity(k, k);
            let a = LinearIt::new(gain.clone(), noise.clone()).unwrap();
            let class = info_class(&a);
            let u = &class.basis;
            let info = u.transpose() * gain.transpose() * noise.try_inverse().unwrap() * &gain * u;
            let oracle = info.try_inverse().unwrap();
            assert!(max_abs(&(&class.s - &oracle)) <= 1e-9 * (1.0 + max_abs(&oracle)));
        }
    }

    #[test]
    fn axioms_hold() {
        let report = verify_axioms(&LinearCat, 3, 100);
        assert!(report.all_passed(), "{report:#?}");
    }

    #[test]
    fn record_round_trip() {
        let a = it(&[&[1.0, 2.0]], &[&[0.5]]);
        let r = LinearRecord::from(&a);
        assert_eq!(LinearIt::try_from(&r).unwrap(), a);
    }
}
