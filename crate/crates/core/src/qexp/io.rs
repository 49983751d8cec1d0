//! Text and binary serialisation of [`FourierSeries`].
//!
//! Text: a `prec=<N>` header line followed by one decimal coefficient per line.
//! Binary: magic `QSER`, `u64` LE precision, then per coefficient a `u32` LE
//! byte length, the little-endian magnitude, and a sign byte (0 for >= 0, 1 for < 0).

use std::io::{BufRead, Read, Write};

use num_bigint::{BigInt, BigUint, Sign};

use super::FourierSeries;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"QSER";

pub fn write_text<W: Write>(s: &FourierSeries, mut w: W) -> Result<()> {
    writeln!(w, "prec={}", s.prec())?;
    for c in s.coeffs() {
        writeln!(w, "{c}")?;
    }
    Ok(())
}

pub fn read_text<R: BufRead>(r: R) -> Result<FourierSeries> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty input".into()))??;
    let prec: usize = header
        .trim()
        .strip_prefix("prec=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
    let mut coeffs = Vec::with_capacity(prec);
    for line in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        coeffs.push(t.parse::<BigInt>().map_err(|e| Error::Parse(format!("{t:?}: {e}")))?);
    }
    if coeffs.len() != prec {
        return Err(Error::Parse(format!("header says {prec} coefficients, found {}", coeffs.len())));
    }
    Ok(FourierSeries::new(coeffs))
}

pub fn write_binary<W: Write>(s: &FourierSeries, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(s.prec() as u64).to_le_bytes())?;
    for c in s.coeffs() {
        let mag = c.magnitude().to_bytes_le();
        let mag: &[u8] = if c.sign() == Sign::NoSign { &[] } else { &mag };
        w.write_all(&(mag.len() as u32).to_le_bytes())?;
        w.write_all(mag)?;
        w.write_all(&[u8::from(c.sign() == Sign::Minus)])?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(mut r: R) -> Result<FourierSeries> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Parse("bad magic".into()));
    }
    let mut buf8 = [0u8; 8];
    r.read_exact(&mut buf8)?;
    let prec = u64::from_le_bytes(buf8) as usize;
    let mut coeffs = Vec::with_capacity(prec.min(1 << 24));
    let mut buf4 = [0u8; 4];
    for _ in 0..prec {
        r.read_exact(&mut buf4)?;
        let len = u32::from_le_bytes(buf4) as usize;
        let mut mag = vec![0u8; len];
        r.read_exact(&mut mag)?;
        let mut sign = [0u8; 1];
        r.read_exact(&mut sign)?;
        let m = BigUint::from_bytes_le(&mag);
        let v = match sign[0] {
            0 => BigInt::from(m),
            1 => -BigInt::from(m),
            s => return Err(Error::Parse(format!("bad sign byte {s}"))),
        };
        coeffs.push(v);
    }
    Ok(FourierSeries::new(coeffs))
}
