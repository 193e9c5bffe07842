//! Binary snapshot of a square complex matrix: `b"OMG1"`, dim as u32 LE,
//! 8 reserved zero bytes, then dim² row-major (re, im) f64 LE pairs.

use std::io::{Read, Write};

use faer::{Mat, MatRef};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const MATRIX_MAGIC: &[u8; 4] = b"OMG1";

pub fn write_matrix_dump<W: Write>(mut w: W, m: MatRef<'_, C64>) -> Result<()> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::Format("matrix must be square".into()));
    }
    let dim = u32::try_from(n).map_err(|_| Error::Format("dimension exceeds u32".into()))?;
    let mut buf = Vec::with_capacity(16 + 16 * n * n);
    buf.extend_from_slice(MATRIX_MAGIC);
    buf.extend_from_slice(&dim.to_le_bytes());
    buf.extend_from_slice(&[0u8; 8]);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_matrix_dump<R: Read>(mut r: R) -> Result<Mat<C64>> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..4] != MATRIX_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let n = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let mut body = vec![0u8; 16 * n * n];
    r.read_exact(&mut body)?;
    let f = |k: usize| f64::from_le_bytes(body[8 * k..8 * k + 8].try_into().unwrap());
    Ok(Mat::from_fn(n, n, |i, j| {
        let k = 2 * (i * n + j);
        C64::new(f(k), f(k + 1))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let m = Mat::<C64>::from_fn(2, 2, |i, j| C64::new(i as f64, j as f64 + 0.5));
        let mut buf = Vec::new();
        write_matrix_dump(&mut buf, m.as_ref()).unwrap();
        assert_eq!(buf.len(), 16 + 4 * 16);
        assert_eq!(&buf[..4], b"OMG1");
        assert_eq!(&buf[4..8], &2u32.to_le_bytes());
        assert_eq!(&buf[8..16], &[0u8; 8]);
        // entry (0, 1) is the second row-major element
        assert_eq!(&buf[32..40], &0.0f64.to_le_bytes());
        assert_eq!(&buf[40..48], &1.5f64.to_le_bytes());
        let back = read_matrix_dump(&buf[..]).unwrap();
        assert_eq!(back, m);
        assert!(read_matrix_dump(&b"XXXX0000000000000000"[..]).is_err());
    }
}
