//! Binary PPM (P6) and PGM (P5) with maxval 255.

use std::fs;
use std::path::Path;

use super::ImageBuffer;
use crate::{Error, Result};

/// Encode as P6 (3 channels) or P5 (1 channel): `"P6\n<w> <h>\n255\n"` + samples.
pub fn encode(img: &ImageBuffer) -> Vec<u8> {
    let magic = if img.channels() == 3 { "P6" } else { "P5" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.data());
    out
}

pub fn decode(bytes: &[u8]) -> Result<ImageBuffer> {
    let mut pos = 0;
    let mut next_token = || -> Result<String> {
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Pnm("truncated header".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    let magic = next_token()?;
    let channels = match magic.as_str() {
        "P6" => 3,
        "P5" => 1,
        other => return Err(Error::Pnm(format!("unsupported magic {other:?}"))),
    };
    let mut number = |what: &str| -> Result<usize> {
        let tok = next_token()?;
        tok.parse()
            .map_err(|_| Error::Pnm(format!("bad {what} {tok:?}")))
    };
    let width = number("width")?;
    let height = number("height")?;
    let maxval = number("maxval")?;
    if maxval != 255 {
        return Err(Error::Pnm(format!("maxval {maxval} unsupported, expected 255")));
    }
    // exactly one whitespace byte separates the header from the raster
    let data_start = pos + 1;
    let len = width * height * channels;
    if bytes.len() < data_start + len {
        return Err(Error::Pnm(format!(
            "raster truncated: need {len} bytes, have {}",
            bytes.len().saturating_sub(data_start)
        )));
    }
    ImageBuffer::new(width, height, channels, bytes[data_start..data_start + len].to_vec())
}

pub fn write(path: &Path, img: &ImageBuffer) -> Result<()> {
    fs::write(path, encode(img)).map_err(|e| Error::io(path, e))
}

pub fn read(path: &Path) -> Result<ImageBuffer> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn header_is_exact() {
        let img = ImageBuffer::new(2, 1, 3, vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(encode(&img), b"P6\n2 1\n255\n\x01\x02\x03\x04\x05\x06".to_vec());
        let gray = ImageBuffer::new(1, 2, 1, vec![7, 8]).unwrap();
        assert_eq!(encode(&gray), b"P5\n1 2\n255\n\x07\x08".to_vec());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(decode(b"P3\n1 1\n255\n").is_err());
        assert!(decode(b"P5\n2 2\n65535\n").is_err());
        assert!(decode(b"P5\n2 2\n255\n\x00").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let img = decode(b"P5\n# made by hand\n1 1\n255\n\x2a").unwrap();
        assert_eq!(img.data(), &[42]);
    }

    proptest! {
        #[test]
        fn round_trip(w in 1usize..8, h in 1usize..8, rgb: bool, fill in proptest::collection::vec(any::<u8>(), 192)) {
            let ch = if rgb { 3 } else { 1 };
            let img = ImageBuffer::new(w, h, ch, fill[..w * h * ch].to_vec()).unwrap();
            prop_assert_eq!(decode(&encode(&img)).unwrap(), img);
        }
    }
}
