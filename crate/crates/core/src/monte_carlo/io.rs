//! Stream files.
//!
//! Binary layout, all little-endian:
//!
//! | offset | size | field |
//! |-------:|-----:|-------|
//! | 0  | 8 | magic `RFSTREAM` |
//! | 8  | 4 | format version (u32, currently 1) |
//! | 12 | 4 | kind (u32: 0 cascade, 1 Poisson reference) |
//! | 16 | 8 | gamma (f64) |
//! | 24 | 8 | omega (f64) |
//! | 32 | 8 | delta (f64) |
//! | 40 | 8 | seed (u64) |
//! | 48 | 8 | photon count n (u64) |
//! | 56 | 8n | emission times (f64) |
//!
//! CSV: `#`-prefixed `key=value` metadata lines, a `time` header row, then one
//! time per line in shortest round-trip decimal form.

use std::io::{BufRead, Read, Write};

use super::rng::GENERATOR_NAME;
use super::stream::{PhotonStream, StreamKind};
use crate::error::{Error, Result};
use crate::AtomDriveParams;

pub const BINARY_MAGIC: &[u8; 8] = b"RFSTREAM";
pub const BINARY_VERSION: u32 = 1;

pub fn write_binary<W: Write>(stream: &PhotonStream, mut out: W) -> Result<()> {
    out.write_all(BINARY_MAGIC)?;
    out.write_all(&BINARY_VERSION.to_le_bytes())?;
    out.write_all(&stream.kind.code().to_le_bytes())?;
    for v in [
        stream.params.gamma,
        stream.params.omega,
        stream.params.delta,
    ] {
        out.write_all(&v.to_le_bytes())?;
    }
    out.write_all(&stream.seed.to_le_bytes())?;
    out.write_all(&(stream.times.len() as u64).to_le_bytes())?;
    let mut buf = Vec::with_capacity(stream.times.len() * 8);
    for t in &stream.times {
        buf.extend_from_slice(&t.to_le_bytes());
    }
    out.write_all(&buf)?;
    out.flush()?;
    Ok(())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<PhotonStream> {
    let mut header = [0u8; 56];
    input.read_exact(&mut header)?;
    if &header[..8] != BINARY_MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
    let u64_at = |o: usize| u64::from_le_bytes(header[o..o + 8].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(header[o..o + 8].try_into().unwrap());
    let version = u32_at(8);
    if version != BINARY_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let kind = StreamKind::from_code(u32_at(12))
        .ok_or_else(|| Error::Format(format!("unknown kind {}", u32_at(12))))?;
    let params = AtomDriveParams::new(f64_at(16), f64_at(24), f64_at(32))?;
    let seed = u64_at(40);
    let n = u64_at(48) as usize;
    let mut body = Vec::new();
    input.read_to_end(&mut body)?;
    if body.len() != n * 8 {
        return Err(Error::Format(format!(
            "expected {} bytes of times, found {}",
            n * 8,
            body.len()
        )));
    }
    let times = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(PhotonStream {
        params,
        seed,
        kind,
        times,
    })
}

fn kind_name(kind: StreamKind) -> &'static str {
    match kind {
        StreamKind::Cascade => "cascade",
        StreamKind::PoissonReference => "poisson_reference",
    }
}

pub fn write_csv<W: Write>(stream: &PhotonStream, mut out: W) -> Result<()> {
    writeln!(
        out,
        "# tool=resfluor version={} generator={GENERATOR_NAME}",
        env!("CARGO_PKG_VERSION")
    )?;
    writeln!(
        out,
        "# kind={} gamma={} omega={} delta={} seed={} photons={}",
        kind_name(stream.kind),
        stream.params.gamma,
        stream.params.omega,
        stream.params.delta,
        stream.seed,
        stream.times.len()
    )?;
    writeln!(out, "time")?;
    for t in &stream.times {
        writeln!(out, "{t}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_csv<R: BufRead>(input: R) -> Result<PhotonStream> {
    let mut meta = std::collections::HashMap::new();
    let mut times = Vec::new();
    let mut seen_header = false;
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            for kv in rest.split_whitespace() {
                if let Some((k, v)) = kv.split_once('=') {
                    meta.insert(k.to_string(), v.to_string());
                }
            }
        } else if line.is_empty() {
            continue;
        } else if !seen_header {
            if line != "time" {
                return Err(Error::Format(format!(
                    "expected `time` header, found `{line}`"
                )));
            }
            seen_header = true;
        } else {
            times.push(
                line.parse::<f64>()
                    .map_err(|e| Error::Format(format!("bad time `{line}`: {e}")))?,
            );
        }
    }
    let get = |k: &str| {
        meta.get(k)
            .ok_or_else(|| Error::Format(format!("missing metadata `{k}`")))
    };
    let num = |k: &str| -> Result<f64> {
        get(k)?
            .parse()
            .map_err(|_| Error::Format(format!("bad metadata `{k}`")))
    };
    let params = AtomDriveParams::new(num("gamma")?, num("omega")?, num("delta")?)?;
    let seed = get("seed")?
        .parse()
        .map_err(|_| Error::Format("bad seed".into()))?;
    let kind = match get("kind")?.as_str() {
        "cascade" => StreamKind::Cascade,
        "poisson_reference" => StreamKind::PoissonReference,
        other => return Err(Error::Format(format!("unknown kind `{other}`"))),
    };
    Ok(PhotonStream {
        params,
        seed,
        kind,
        times,
    })
}
