//! Channel model for the 2-user Gaussian MIMO interference channel.
//!
//! A channel instance carries the four complex channel matrices, the four
//! transmit powers, and the antenna counts. This module also provides the
//! whitened-interference matrices `K_i`, the reciprocal (role-swapped)
//! channel, the antenna-only gap constants, and a seeded random generator.

use crate::matrix::{gram_adjoint, inv_hpd, HermitianMatrix, ToleranceProfile, C64, MAX_DIM};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the two transmit/receive pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum User {
    One,
    Two,
}

impl User {
    /// Zero-based index, handy for the paired arrays used elsewhere.
    pub fn index(self) -> usize {
        match self {
            User::One => 0,
            User::Two => 1,
        }
    }

    /// The other user.
    pub fn other(self) -> User {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }
}

/// Failure modes of channel construction and parsing.
#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("antenna count {dim} out of range 1..={MAX_DIM}")]
    BadAntennaCount { dim: usize },
    #[error("{name} is {got_rows}x{got_cols}, expected {want_rows}x{want_cols}")]
    DimensionMismatch {
        name: &'static str,
        want_rows: usize,
        want_cols: usize,
        got_rows: usize,
        got_cols: usize,
    },
    #[error("{name} has a non-finite entry")]
    NotFinite { name: &'static str },
    #[error("{name} has {got} entries, expected {want}")]
    BadEntryCount {
        name: &'static str,
        want: usize,
        got: usize,
    },
    #[error("channel JSON is invalid: {0}")]
    Parse(String),
}

/// Validated channel instance.
///
/// `h[i][j]` maps transmitter i+1 into receiver j+1 and has shape
/// `N_{j+1} x M_{i+1}`. Powers are stored on the linear scale; the public
/// constructors take decibels.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelConfig {
    m1: usize,
    n1: usize,
    m2: usize,
    n2: usize,
    h11: DMatrix<C64>,
    h12: DMatrix<C64>,
    h21: DMatrix<C64>,
    h22: DMatrix<C64>,
    /// Linear powers ordered [rho11, rho12, rho21, rho22].
    rho: [f64; 4],
}

fn check_shape(
    name: &'static str,
    m: &DMatrix<C64>,
    want_rows: usize,
    want_cols: usize,
) -> Result<(), ChannelError> {
    if m.shape() != (want_rows, want_cols) {
        return Err(ChannelError::DimensionMismatch {
            name,
            want_rows,
            want_cols,
            got_rows: m.nrows(),
            got_cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(ChannelError::NotFinite { name });
    }
    Ok(())
}

/// Builds a channel from antenna counts `[M1, N1, M2, N2]`, the four link
/// matrices, and per-link powers in decibels `[rho11, rho12, rho21, rho22]`.
pub fn make_channel(
    dims: [usize; 4],
    h11: DMatrix<C64>,
    h12: DMatrix<C64>,
    h21: DMatrix<C64>,
    h22: DMatrix<C64>,
    rho_db: [f64; 4],
) -> Result<ChannelConfig, ChannelError> {
    let [m1, n1, m2, n2] = dims;
    for dim in dims {
        if !(1..=MAX_DIM).contains(&dim) {
            return Err(ChannelError::BadAntennaCount { dim });
        }
    }
    check_shape("H11", &h11, n1, m1)?;
    check_shape("H12", &h12, n2, m1)?;
    check_shape("H21", &h21, n1, m2)?;
    check_shape("H22", &h22, n2, m2)?;
    if rho_db.iter().any(|r| !r.is_finite()) {
        return Err(ChannelError::NotFinite { name: "rho_db" });
    }
    let rho = rho_db.map(|db| 10f64.powf(db / 10.0));
    Ok(ChannelConfig {
        m1,
        n1,
        m2,
        n2,
        h11,
        h12,
        h21,
        h22,
        rho,
    })
}

impl ChannelConfig {
    pub fn dims(&self) -> [usize; 4] {
        [self.m1, self.n1, self.m2, self.n2]
    }

    /// Transmit antennas of the given user.
    pub fn tx_dim(&self, u: User) -> usize {
        match u {
            User::One => self.m1,
            User::Two => self.m2,
        }
    }

    /// Receive antennas of the given user.
    pub fn rx_dim(&self, u: User) -> usize {
        match u {
            User::One => self.n1,
            User::Two => self.n2,
        }
    }

    /// Link matrix from transmitter `tx` to receiver `rx`.
    pub fn h(&self, tx: User, rx: User) -> &DMatrix<C64> {
        match (tx, rx) {
            (User::One, User::One) => &self.h11,
            (User::One, User::Two) => &self.h12,
            (User::Two, User::One) => &self.h21,
            (User::Two, User::Two) => &self.h22,
        }
    }

    /// Linear power on the link from transmitter `tx` to receiver `rx`.
    pub fn rho(&self, tx: User, rx: User) -> f64 {
        match (tx, rx) {
            (User::One, User::One) => self.rho[0],
            (User::One, User::Two) => self.rho[1],
            (User::Two, User::One) => self.rho[2],
            (User::Two, User::Two) => self.rho[3],
        }
    }

    /// Linear powers ordered [rho11, rho12, rho21, rho22].
    pub fn rho_all(&self) -> [f64; 4] {
        self.rho
    }

    /// Whitened-interference shaping matrix of user `u`:
    /// the inverse of I plus the power-scaled gram of the cross link that
    /// user `u` creates at the other receiver. Eigenvalues lie in (0, 1].
    pub fn k_matrix(&self, u: User) -> HermitianMatrix {
        let other = u.other();
        let h_cross = self.h(u, other);
        let rho_cross = self.rho(u, other);
        let base =
            HermitianMatrix::identity(self.tx_dim(u)).add(&gram_adjoint(h_cross).scaled(rho_cross));
        inv_hpd(&base, &ToleranceProfile::DEFAULT)
            .expect("I plus a gram matrix is positive definite")
    }

    /// Reciprocal channel: antenna counts swap within each user, every link
    /// matrix is transposed, and the two cross powers trade places.
    pub fn reciprocal(&self) -> ChannelConfig {
        ChannelConfig {
            m1: self.n1,
            n1: self.m1,
            m2: self.n2,
            n2: self.m2,
            h11: self.h11.transpose(),
            h12: self.h21.transpose(),
            h21: self.h12.transpose(),
            h22: self.h22.transpose(),
            rho: [self.rho[0], self.rho[2], self.rho[1], self.rho[3]],
        }
    }

    /// Antenna-count gap constants for this channel's dimensions.
    pub fn gap_constants(&self) -> GapConstants {
        GapConstants::from_dims(self.dims())
    }
}

/// Constant rate penalties determined by antenna counts alone.
///
/// `n1`/`n2` certify the coarse achievable region, `n1_star`/`n2_star` the
/// refined one, and `m1_star`/`m2_star` are the reciprocal-channel
/// counterparts of the starred pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapConstants {
    pub n1: f64,
    pub n2: f64,
    pub n1_star: f64,
    pub n2_star: f64,
    pub m1_star: f64,
    pub m2_star: f64,
    /// `m[i][j] = min(M_{i+1}, N_{j+1})`, the rank cap of link i+1 -> j+1.
    pub m: [[usize; 2]; 2],
    /// `m_hat[i][j] = m[i][j] * log2((M_{i+1}+1)/M_{i+1})`.
    pub m_hat: [[f64; 2]; 2],
    /// `m_tilde[i][j] = m[i][j] * log2((N_{j+1}+1)/N_{j+1})`.
    pub m_tilde: [[f64; 2]; 2],
    pub m_x: usize,
    pub m_s: usize,
    pub n_x: usize,
    pub n_s: usize,
}

impl GapConstants {
    /// Computes every constant from antenna counts `[M1, N1, M2, N2]`.
    pub fn from_dims(dims: [usize; 4]) -> GapConstants {
        let [m1, n1, m2, n2] = dims;
        let tx = [m1, m2];
        let rx = [n1, n2];
        let mut m = [[0usize; 2]; 2];
        let mut m_hat = [[0f64; 2]; 2];
        let mut m_tilde = [[0f64; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = tx[i].min(rx[j]);
                m_hat[i][j] = m[i][j] as f64 * ((tx[i] + 1) as f64 / tx[i] as f64).log2();
                m_tilde[i][j] = m[i][j] as f64 * ((rx[j] + 1) as f64 / rx[j] as f64).log2();
            }
        }
        let m_x = m1.max(m2);
        let m_s = m1 + m2;
        let n_x = n1.max(n2);
        let n_s = n1 + n2;

        let n_of = |i: usize| {
            let j = 1 - i;
            let direct = m[i][i] as f64 * (tx[i] as f64).log2()
                + m[i][j] as f64 * ((tx[i] + 1) as f64).log2();
            let pooled = rx[i].min(m_s) as f64 * (m_x as f64).log2();
            direct.max(pooled) + m_hat[j][i]
        };
        let n_star_of = |i: usize| {
            let j = 1 - i;
            rx[i].min(m_s) as f64 * (m_x as f64).log2() + m_hat[j][i]
        };
        let m_star_of = |i: usize| {
            let j = 1 - i;
            tx[i].min(n_s) as f64 * (n_x as f64).log2() + m_tilde[i][j]
        };

        GapConstants {
            n1: n_of(0),
            n2: n_of(1),
            n1_star: n_star_of(0),
            n2_star: n_star_of(1),
            m1_star: m_star_of(0),
            m2_star: m_star_of(1),
            m,
            m_hat,
            m_tilde,
            m_x,
            m_s,
            n_x,
            n_s,
        }
    }
}

/// Convenience wrapper for [`GapConstants::from_dims`] on a channel.
pub fn gap_constants(ch: &ChannelConfig) -> GapConstants {
    ch.gap_constants()
}

fn gauss_pair(rng: &mut ChaCha12Rng) -> (f64, f64) {
    // Box-Muller; u1 shifted into (0, 1] so the log stays finite
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random();
    let r = (-2.0 * u1.ln()).sqrt();
    let th = 2.0 * std::f64::consts::PI * u2;
    (r * th.cos(), r * th.sin())
}

pub(crate) fn random_gaussian_matrix(
    rng: &mut ChaCha12Rng,
    rows: usize,
    cols: usize,
) -> DMatrix<C64> {
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            let (re, im) = gauss_pair(rng);
            m[(r, c)] = C64::new(re * inv_sqrt2, im * inv_sqrt2);
        }
    }
    m
}

/// Draws a channel with unit-variance circular complex Gaussian entries and
/// per-link powers uniform in `rho_db_range` (decibels).
///
/// Deterministic: a fixed `(dims, rho_db_range, seed)` always yields the same
/// channel. Draw order is H11, H12, H21, H22 (row-major), then the four
/// powers in [rho11, rho12, rho21, rho22] order.
pub fn random_channel(dims: [usize; 4], rho_db_range: (f64, f64), seed: u64) -> ChannelConfig {
    let (lo, hi) = rho_db_range;
    assert!(
        lo.is_finite() && hi.is_finite() && lo <= hi,
        "bad power range"
    );
    let [m1, n1, m2, n2] = dims;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let h11 = random_gaussian_matrix(&mut rng, n1, m1);
    let h12 = random_gaussian_matrix(&mut rng, n2, m1);
    let h21 = random_gaussian_matrix(&mut rng, n1, m2);
    let h22 = random_gaussian_matrix(&mut rng, n2, m2);
    let mut rho_db = [0f64; 4];
    for slot in rho_db.iter_mut() {
        *slot = rng.random_range(lo..=hi);
    }
    make_channel(dims, h11, h12, h21, h22, rho_db).expect("drawn shapes are consistent")
}

/// JSON wire format for a channel: antenna counts, flat row-major matrices
/// of `[re, im]` pairs, powers in decibels, and an optional seed tag.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub dims: [usize; 4],
    #[serde(rename = "H11")]
    pub h11: Vec<[f64; 2]>,
    #[serde(rename = "H12")]
    pub h12: Vec<[f64; 2]>,
    #[serde(rename = "H21")]
    pub h21: Vec<[f64; 2]>,
    #[serde(rename = "H22")]
    pub h22: Vec<[f64; 2]>,
    pub rho_db: [f64; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn entries_to_matrix(
    name: &'static str,
    entries: &[[f64; 2]],
    rows: usize,
    cols: usize,
) -> Result<DMatrix<C64>, ChannelError> {
    if entries.len() != rows * cols {
        return Err(ChannelError::BadEntryCount {
            name,
            want: rows * cols,
            got: entries.len(),
        });
    }
    let flat: Vec<C64> = entries.iter().map(|[re, im]| C64::new(*re, *im)).collect();
    Ok(DMatrix::from_row_slice(rows, cols, &flat))
}

impl ChannelSpec {
    /// Validates the wire format and builds the channel.
    pub fn to_channel(&self) -> Result<ChannelConfig, ChannelError> {
        let [m1, n1, m2, n2] = self.dims;
        for dim in self.dims {
            if !(1..=MAX_DIM).contains(&dim) {
                return Err(ChannelError::BadAntennaCount { dim });
            }
        }
        let h11 = entries_to_matrix("H11", &self.h11, n1, m1)?;
        let h12 = entries_to_matrix("H12", &self.h12, n2, m1)?;
        let h21 = entries_to_matrix("H21", &self.h21, n1, m2)?;
        let h22 = entries_to_matrix("H22", &self.h22, n2, m2)?;
        make_channel(self.dims, h11, h12, h21, h22, self.rho_db)
    }
}

/// Parses a channel from its JSON wire format.
pub fn channel_from_json(text: &str) -> Result<ChannelConfig, ChannelError> {
    let spec: ChannelSpec =
        serde_json::from_str(text).map_err(|e| ChannelError::Parse(e.to_string()))?;
    spec.to_channel()
}
