//! Binary checkpoint, little-endian:
//!
//! ```text
//! "MHD2"            4 bytes
//! version           u32 (= 1)
//! n                 u32
//! t, α, β, ν, η     f64 each
//! w coefficients    n·n (re f64, im f64) pairs in array order
//! j coefficients    same
//! ```

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::dynamics::state::MHDState;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::TorusGrid;

pub const MAGIC: &[u8; 4] = b"MHD2";
pub const VERSION: u32 = 1;
const HEADER: usize = 4 + 4 + 4 + 5 * 8;

#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub state: MHDState,
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub eta: f64,
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let grid = self.state.grid();
        let mut out = Vec::with_capacity(HEADER + 32 * grid.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
        for v in [self.state.t, self.alpha, self.beta, self.nu, self.eta] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for field in [self.state.w(), self.state.j()] {
            for c in field.coefficients() {
                out.extend_from_slice(&c.re.to_le_bytes());
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let fail = |m: &str| Error::Format(format!("checkpoint: {m}"));
        if bytes.len() < HEADER {
            return Err(fail("truncated header"));
        }
        if &bytes[..4] != MAGIC {
            return Err(fail("bad magic"));
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let version = u32_at(4);
        if version != VERSION {
            return Err(fail(&format!("unsupported version {version}")));
        }
        let n = u32_at(8) as usize;
        let grid = TorusGrid::new(n)?;
        if bytes.len() != HEADER + 32 * grid.len() {
            return Err(fail(&format!("expected {} bytes for n = {n}, found {}", HEADER + 32 * grid.len(), bytes.len())));
        }
        let [t, alpha, beta, nu, eta] = [0, 1, 2, 3, 4].map(|k| f64_at(12 + 8 * k));
        let read = |start: usize| -> Result<SpectralField> {
            let data = (0..grid.len())
                .map(|i| {
                    let o = start + 16 * i;
                    Complex64::new(f64_at(o), f64_at(o + 8))
                })
                .collect();
            let mut f = SpectralField::from_coefficients(&grid, data)?;
            let cutoff = grid.dealias_cutoff() as i64;
            let clean = f.coefficients()[0] == Complex64::new(0.0, 0.0)
                && f.coefficients().iter().enumerate().all(|(i, c)| {
                    let (k1, k2) = grid.wavevector(i);
                    k1.abs().max(k2.abs()) <= cutoff || (c.re == 0.0 && c.im == 0.0)
                });
            if !clean {
                return Err(fail("state is not mean-free and dealiased"));
            }
            f.set_dealiased(true);
            Ok(f)
        };
        let w = read(HEADER)?;
        let j = read(HEADER + 16 * grid.len())?;
        if !t.is_finite() {
            return Err(fail("non-finite time"));
        }
        Ok(Checkpoint { state: MHDState::from_parts(t, w, j), alpha, beta, nu, eta })
    }
}

pub fn write_checkpoint(path: &Path, checkpoint: &Checkpoint) -> Result<()> {
    fs::write(path, checkpoint.to_bytes())?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    Checkpoint::from_bytes(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{make_initial, InitKind, SolverConfig};

    fn sample() -> Checkpoint {
        let cfg = SolverConfig { n: 16, init: InitKind::RandomBand, band: 5, seed: 3, ..Default::default() };
        let mut state = make_initial(&cfg).unwrap();
        state.t = 0.123456789;
        Checkpoint { state, alpha: 0.0, beta: 1.6, nu: 0.0, eta: 1.0 }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let c = sample();
        let bytes = c.to_bytes();
        assert_eq!(&bytes[..4], b"MHD2");
        assert_eq!(bytes.len(), HEADER + 32 * 256);
        let back = Checkpoint::from_bytes(&bytes).unwrap();
        assert_eq!(back.to_bytes(), bytes);
        assert_eq!(back.state.t.to_bits(), c.state.t.to_bits());
    }

    #[test]
    fn rejects_corruption() {
        let bytes = sample().to_bytes();
        assert!(Checkpoint::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Checkpoint::from_bytes(&bad).is_err());
        let mut bad = bytes;
        bad[4] = 2;
        assert!(Checkpoint::from_bytes(&bad).is_err());
    }
}
