//! Uncompressed cover images and their LSB plane.
//!
//! Supported: binary PGM (`P5`, maxval 255) and 24-bit uncompressed BMP
//! with a `BITMAPINFOHEADER`. Pixel bytes are kept in file order: BMP rows
//! stay in stored order (usually bottom-up) with channels as stored (BGR),
//! row padding removed. The LSB stream is bit `i` = LSB of byte `i` of that
//! buffer, so both ends agree without knowing the geometry.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    /// `top_down` records a negative stored height.
    Bmp { top_down: bool },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverImage {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub pixels: Vec<u8>,
    pub format: ImageFormat,
}

impl CoverImage {
    /// 8-bit grayscale image that saves as PGM.
    pub fn grayscale(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        Self::checked(width, height, 1, pixels, ImageFormat::Pgm)
    }

    /// 24-bit image that saves as a bottom-up BMP. `pixels` are in file order.
    pub fn bgr(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        Self::checked(width, height, 3, pixels, ImageFormat::Bmp { top_down: false })
    }

    fn checked(
        width: usize,
        height: usize,
        channels: usize,
        pixels: Vec<u8>,
        format: ImageFormat,
    ) -> Result<Self> {
        if pixels.len() != width * height * channels {
            return Err(Error::Format(format!(
                "{width}x{height}x{channels} image needs {} bytes, got {}",
                width * height * channels,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            pixels,
            format,
        })
    }

    /// Number of LSB cover bits.
    pub fn capacity(&self) -> usize {
        self.pixels.len()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        match bytes {
            [b'P', b'5', ..] => decode_pgm(bytes),
            [b'P', b'2' | b'1' | b'3' | b'4' | b'6', ..] => Err(Error::Format(format!(
                "unsupported netpbm variant P{}; only binary P5 is accepted",
                bytes[1] as char
            ))),
            [b'B', b'M', ..] => decode_bmp(bytes),
            _ => Err(Error::Format("unrecognised image signature".into())),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        match self.format {
            ImageFormat::Pgm => encode_pgm(self),
            ImageFormat::Bmp { top_down } => encode_bmp(self, top_down),
        }
    }
}

pub fn load_image(path: impl AsRef<Path>) -> Result<CoverImage> {
    CoverImage::decode(&fs::read(path)?)
}

pub fn save_image(img: &CoverImage, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, img.encode())?;
    Ok(())
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderReader<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.bytes.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("PGM header: missing or bad {what}")))
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<CoverImage> {
    let mut r = HeaderReader { bytes, pos: 2 };
    let width = r.number("width")?;
    let height = r.number("height")?;
    let maxval = r.number("maxval")?;
    if maxval != 255 {
        return Err(Error::Format(format!("PGM maxval {maxval} unsupported (need 255)")));
    }
    // exactly one whitespace byte separates the header from the raster
    if !bytes.get(r.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Format("PGM header not terminated by whitespace".into()));
    }
    let start = r.pos + 1;
    let need = width * height;
    let raster = bytes
        .get(start..start + need)
        .ok_or_else(|| Error::Format(format!(
            "PGM raster truncated: need {need} bytes, have {}",
            bytes.len().saturating_sub(start)
        )))?;
    CoverImage::checked(width, height, 1, raster.to_vec(), ImageFormat::Pgm)
}

fn encode_pgm(img: &CoverImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

const BMP_FILE_HEADER: usize = 14;
const BMP_INFO_HEADER: usize = 40;

fn le_u16(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn le_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().expect("4 bytes"))
}

fn bmp_stride(width: usize) -> usize {
    (width * 3).div_ceil(4) * 4
}

fn decode_bmp(bytes: &[u8]) -> Result<CoverImage> {
    if bytes.len() < BMP_FILE_HEADER + BMP_INFO_HEADER {
        return Err(Error::Format("BMP header truncated".into()));
    }
    let offset = le_u32(bytes, 10) as usize;
    let info_size = le_u32(bytes, 14) as usize;
    if info_size < BMP_INFO_HEADER {
        return Err(Error::Format(format!("BMP info header of {info_size} bytes unsupported")));
    }
    let width = le_u32(bytes, 18) as i32;
    let height = le_u32(bytes, 22) as i32;
    let planes = le_u16(bytes, 26);
    let bit_count = le_u16(bytes, 28);
    let compression = le_u32(bytes, 30);
    if planes != 1 || bit_count != 24 || compression != 0 {
        return Err(Error::Format(format!(
            "BMP must be 24-bit uncompressed (planes={planes} bits={bit_count} compression={compression})"
        )));
    }
    if width <= 0 || height == 0 {
        return Err(Error::Format(format!("BMP dimensions {width}x{height} invalid")));
    }
    let (width, top_down) = (width as usize, height < 0);
    let height = height.unsigned_abs() as usize;
    let stride = bmp_stride(width);
    let end = offset + stride * height;
    if offset < BMP_FILE_HEADER + info_size || bytes.len() < end {
        return Err(Error::Format(format!(
            "BMP pixel array truncated: need {end} bytes, have {}",
            bytes.len()
        )));
    }
    let mut pixels = Vec::with_capacity(width * height * 3);
    for row in bytes[offset..end].chunks_exact(stride) {
        pixels.extend_from_slice(&row[..width * 3]);
    }
    CoverImage::checked(width, height, 3, pixels, ImageFormat::Bmp { top_down })
}

fn encode_bmp(img: &CoverImage, top_down: bool) -> Vec<u8> {
    let stride = bmp_stride(img.width);
    let image_size = stride * img.height;
    let offset = BMP_FILE_HEADER + BMP_INFO_HEADER;
    let mut out = Vec::with_capacity(offset + image_size);
    out.extend_from_slice(b"BM");
    out.extend_from_slice(&((offset + image_size) as u32).to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    out.extend_from_slice(&(offset as u32).to_le_bytes());
    out.extend_from_slice(&(BMP_INFO_HEADER as u32).to_le_bytes());
    out.extend_from_slice(&(img.width as i32).to_le_bytes());
    let h = img.height as i32;
    out.extend_from_slice(&(if top_down { -h } else { h }).to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&24u16.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&(image_size as u32).to_le_bytes());
    out.extend_from_slice(&2835i32.to_le_bytes());
    out.extend_from_slice(&2835i32.to_le_bytes());
    out.extend_from_slice(&[0; 8]);
    let pad = stride - img.width * 3;
    for row in img.pixels.chunks_exact(img.width * 3) {
        out.extend_from_slice(row);
        out.extend(std::iter::repeat_n(0u8, pad));
    }
    out
}

/// LSB of every pixel byte, in buffer order.
pub fn lsb_extract(img: &CoverImage) -> BitVector {
    BitVector::from_bits(img.pixels.iter().map(|b| b & 1))
}

/// Copy of `img` with the LSB of byte `i` set to `bits[i]`.
pub fn lsb_inject(img: &CoverImage, bits: &BitVector) -> Result<CoverImage> {
    if bits.len() > img.capacity() {
        return Err(Error::Capacity {
            required: bits.len(),
            available: img.capacity(),
        });
    }
    let mut out = img.clone();
    for (px, b) in out.pixels.iter_mut().zip(bits.iter()) {
        *px = (*px & !1) | b as u8;
    }
    Ok(out)
}

/// PSNR in dB against an 8-bit peak; `None` when the images are identical.
pub fn peak_signal_noise(orig: &CoverImage, stego: &CoverImage) -> Result<Option<f64>> {
    if (orig.width, orig.height, orig.channels) != (stego.width, stego.height, stego.channels) {
        return Err(Error::Dimension {
            op: "PSNR",
            expected: orig.pixels.len(),
            found: stego.pixels.len(),
        });
    }
    let sse: f64 = orig
        .pixels
        .iter()
        .zip(&stego.pixels)
        .map(|(&a, &b)| {
            let d = a as f64 - b as f64;
            d * d
        })
        .sum();
    if sse == 0.0 {
        return Ok(None);
    }
    let mse = sse / orig.pixels.len() as f64;
    Ok(Some(10.0 * (255.0f64 * 255.0 / mse).log10()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pgm_4x4() -> Vec<u8> {
        let mut f = b"P5\n# synthetic\n4 4\n255\n".to_vec();
        f.extend(0u8..16);
        f
    }

    // 2x2 BMP: stride 8 (6 pixel bytes + 2 padding)
    fn bmp_2x2() -> Vec<u8> {
        let mut f = Vec::new();
        f.extend_from_slice(b"BM");
        f.extend_from_slice(&70u32.to_le_bytes());
        f.extend_from_slice(&[0; 4]);
        f.extend_from_slice(&54u32.to_le_bytes());
        f.extend_from_slice(&40u32.to_le_bytes());
        f.extend_from_slice(&2i32.to_le_bytes());
        f.extend_from_slice(&2i32.to_le_bytes());
        f.extend_from_slice(&1u16.to_le_bytes());
        f.extend_from_slice(&24u16.to_le_bytes());
        f.extend_from_slice(&[0; 4]);
        f.extend_from_slice(&16u32.to_le_bytes());
        f.extend_from_slice(&[0; 16]);
        f.extend_from_slice(&[1, 2, 3, 4, 5, 6, 0xEE, 0xEE]);
        f.extend_from_slice(&[7, 8, 9, 10, 11, 12, 0xEE, 0xEE]);
        f
    }

    #[test]
    fn pgm_load() {
        let img = CoverImage::decode(&pgm_4x4()).unwrap();
        assert_eq!((img.width, img.height, img.channels), (4, 4, 1));
        assert_eq!(img.pixels, (0u8..16).collect::<Vec<_>>());
    }

    #[test]
    fn pgm_save_header() {
        let img = CoverImage::decode(&pgm_4x4()).unwrap();
        let out = img.encode();
        assert!(out.starts_with(b"P5\n4 4\n255\n"));
        assert_eq!(CoverImage::decode(&out).unwrap(), img);
    }

    #[test]
    fn pgm_rejections() {
        assert!(CoverImage::decode(b"P2\n2 2\n255\n0 0 0 0\n").is_err());
        assert!(CoverImage::decode(b"P5\n2 2\n65535\n\0\0\0\0\0\0\0\0").is_err());
        assert!(CoverImage::decode(b"P5\n4 4\n255\n\0\0\0").is_err());
        assert!(CoverImage::decode(b"P5\nx 4\n255\n").is_err());
        assert!(CoverImage::decode(b"GIF89a").is_err());
    }

    #[test]
    fn bmp_load_strips_padding() {
        let img = CoverImage::decode(&bmp_2x2()).unwrap();
        assert_eq!((img.width, img.height, img.channels), (2, 2, 3));
        assert_eq!(img.pixels, (1u8..=12).collect::<Vec<_>>());
        assert_eq!(img.format, ImageFormat::Bmp { top_down: false });
    }

    #[test]
    fn bmp_save_repads() {
        let img = CoverImage::decode(&bmp_2x2()).unwrap();
        let out = img.encode();
        assert_eq!(out.len(), 70);
        assert_eq!(&out[54..62], &[1, 2, 3, 4, 5, 6, 0, 0]);
        assert_eq!(CoverImage::decode(&out).unwrap(), img);
    }

    #[test]
    fn bmp_top_down_preserved() {
        let img = CoverImage {
            format: ImageFormat::Bmp { top_down: true },
            ..CoverImage::bgr(3, 1, vec![9; 9]).unwrap()
        };
        let out = img.encode();
        assert_eq!(le_u32(&out, 22) as i32, -1);
        assert_eq!(CoverImage::decode(&out).unwrap(), img);
    }

    #[test]
    fn bmp_rejections() {
        let mut f = bmp_2x2();
        f[28] = 32;
        assert!(CoverImage::decode(&f).is_err());
        let mut f = bmp_2x2();
        f[30] = 1;
        assert!(CoverImage::decode(&f).is_err());
        let f = bmp_2x2();
        assert!(CoverImage::decode(&f[..65]).is_err());
        assert!(CoverImage::decode(&f[..30]).is_err());
    }

    #[test]
    fn lsb_plane() {
        let img = CoverImage::grayscale(2, 2, vec![255, 254, 1, 2]).unwrap();
        assert_eq!(lsb_extract(&img).to_string(), "1010");
        let zero = CoverImage::grayscale(3, 1, vec![0; 3]).unwrap();
        assert!(lsb_extract(&zero).is_zero());

        let same = lsb_inject(&img, &lsb_extract(&img)).unwrap();
        assert_eq!(same, img);

        let changed = lsb_inject(&img, &"0".parse().unwrap()).unwrap();
        assert_eq!(changed.pixels, vec![254, 254, 1, 2]);
        assert!(lsb_inject(&img, &BitVector::zeros(5)).is_err());
    }

    #[test]
    fn psnr_cases() {
        let a = CoverImage::grayscale(4, 4, vec![100; 16]).unwrap();
        assert_eq!(peak_signal_noise(&a, &a).unwrap(), None);
        let mut b = a.clone();
        b.pixels[3] = 101;
        let expected = 10.0 * (255.0f64 * 255.0 * 16.0).log10();
        let got = peak_signal_noise(&a, &b).unwrap().unwrap();
        assert!((got - expected).abs() < 1e-9);
        let c = CoverImage::grayscale(2, 8, vec![100; 16]).unwrap();
        assert!(peak_signal_noise(&a, &c).is_err());
    }
}
