use std::io::{Read, Write};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::wavefunction::WaveFn2P;

pub const WAVEFUNCTION_MAGIC: &[u8; 4] = b"WF2P";

/// Header (magic, nx, ny as u32 LE, t as f64 LE) followed by the row-major
/// amplitudes as little-endian (re, im) pairs.
pub fn write_wavefunction_dump<W: Write>(mut w: W, psi: &WaveFn2P, t: f64) -> Result<()> {
    w.write_all(WAVEFUNCTION_MAGIC)?;
    for n in [psi.grid.nx, psi.grid.ny] {
        let n = u32::try_from(n).map_err(|_| Error::Format("grid too large".into()))?;
        w.write_all(&n.to_le_bytes())?;
    }
    w.write_all(&t.to_le_bytes())?;
    let mut buf = Vec::with_capacity(16 * psi.amplitudes.len());
    for z in &psi.amplitudes {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub struct WavefunctionDump {
    pub nx: usize,
    pub ny: usize,
    pub t: f64,
    pub amplitudes: Vec<C64>,
}

pub fn read_wavefunction_dump<R: Read>(mut r: R) -> Result<WavefunctionDump> {
    let mut head = [0u8; 20];
    r.read_exact(&mut head)?;
    if &head[..4] != WAVEFUNCTION_MAGIC {
        return Err(Error::Format("bad magic, expected WF2P".into()));
    }
    let u32_at = |i: usize| u32::from_le_bytes(head[i..i + 4].try_into().unwrap()) as usize;
    let (nx, ny) = (u32_at(4), u32_at(8));
    let t = f64::from_le_bytes(head[12..20].try_into().unwrap());
    let n = (nx * ny).pow(2);
    let mut body = vec![0u8; 16 * n];
    r.read_exact(&mut body)?;
    let amplitudes = body
        .chunks_exact(16)
        .map(|c| {
            C64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    Ok(WavefunctionDump { nx, ny, t, amplitudes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use crate::wavefunction::Symmetry;

    #[test]
    fn round_trip() {
        let g = Grid2D::new(16, 16, 1.0, 2.0, [0.0; 2]).unwrap();
        let amps = (0..g.len() * g.len()).map(|i| C64::new(i as f64, -0.5 * i as f64)).collect();
        let psi = WaveFn2P::new(g, amps, Symmetry::None).unwrap();
        let mut bytes = Vec::new();
        write_wavefunction_dump(&mut bytes, &psi, 12.25).unwrap();
        assert_eq!(&bytes[..4], b"WF2P");
        assert_eq!(bytes.len(), 20 + 16 * g.len() * g.len());
        let back = read_wavefunction_dump(bytes.as_slice()).unwrap();
        assert_eq!((back.nx, back.ny, back.t), (16, 16, 12.25));
        assert_eq!(back.amplitudes, psi.amplitudes);
    }
}
