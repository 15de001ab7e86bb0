//! Minimal 8-bit raster with the strip surgery needed by the structural
//! operations: cutting out a vertical/horizontal band and splicing a copy of
//! one back in somewhere else.
//!
//! Pixels are stored row-major, interleaved, with 1 (gray) or 3 (RGB)
//! channels.

use std::path::Path;

use image::{DynamicImage, GrayImage, RgbImage};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Raster {
    width: u32,
    height: u32,
    channels: u8,
    data: Vec<u8>,
}

impl std::fmt::Debug for Raster {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Raster")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("channels", &self.channels)
            .finish_non_exhaustive()
    }
}

impl Raster {
    /// A raster filled with `value` in every channel.
    pub fn filled(width: u32, height: u32, channels: u8, value: u8) -> Self {
        assert!(channels == 1 || channels == 3, "unsupported channel count {channels}");
        Raster {
            width,
            height,
            channels,
            data: vec![value; width as usize * height as usize * channels as usize],
        }
    }

    pub fn from_raw(width: u32, height: u32, channels: u8, data: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::Domain(format!("unsupported channel count {channels}")));
        }
        let expected = width as usize * height as usize * channels as usize;
        if data.len() != expected {
            return Err(Error::Domain(format!(
                "raw buffer has {} bytes, expected {expected}",
                data.len()
            )));
        }
        Ok(Raster {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.data
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * self.channels as usize
    }

    pub fn pixel(&self, x: u32, y: u32) -> &[u8] {
        let o = self.offset(x, y);
        &self.data[o..o + self.channels as usize]
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, px: &[u8]) {
        let o = self.offset(x, y);
        let c = self.channels as usize;
        self.data[o..o + c].copy_from_slice(&px[..c]);
    }

    /// Fills the rectangle `[x1, x2) × [y1, y2)` (clipped to the canvas).
    pub fn fill_rect(&mut self, x1: u32, y1: u32, x2: u32, y2: u32, value: u8) {
        let c = self.channels as usize;
        for y in y1.min(self.height)..y2.min(self.height) {
            let a = self.offset(x1.min(self.width), y);
            let b = a + (x2.min(self.width).saturating_sub(x1.min(self.width))) as usize * c;
            self.data[a..b].fill(value);
        }
    }

    /// Luminance (Rec. 601, integer rounding) per pixel.
    pub fn to_gray(&self) -> Raster {
        if self.channels == 1 {
            return self.clone();
        }
        let data = self
            .data
            .chunks_exact(3)
            .map(|p| {
                let l = 299 * p[0] as u32 + 587 * p[1] as u32 + 114 * p[2] as u32;
                ((l + 500) / 1000) as u8
            })
            .collect();
        Raster {
            width: self.width,
            height: self.height,
            channels: 1,
            data,
        }
    }

    /// Removes the columns `[x1, x2)`; everything right of `x2` moves left.
    pub fn remove_columns(&self, x1: u32, x2: u32) -> Raster {
        assert!(x1 <= x2 && x2 <= self.width);
        let c = self.channels as usize;
        let row_len = self.width as usize * c;
        let new_width = self.width - (x2 - x1);
        let mut data = Vec::with_capacity(new_width as usize * self.height as usize * c);
        for row in self.data.chunks_exact(row_len) {
            data.extend_from_slice(&row[..x1 as usize * c]);
            data.extend_from_slice(&row[x2 as usize * c..]);
        }
        Raster {
            width: new_width,
            height: self.height,
            channels: self.channels,
            data,
        }
    }

    /// Opens a gap at `dst` and fills it with a copy of the columns
    /// `[src1, src2)` of `self` (as they were before the gap was opened).
    pub fn splice_columns(&self, src1: u32, src2: u32, dst: u32) -> Raster {
        assert!(src1 <= src2 && src2 <= self.width && dst <= self.width);
        let c = self.channels as usize;
        let row_len = self.width as usize * c;
        let new_width = self.width + (src2 - src1);
        let mut data = Vec::with_capacity(new_width as usize * self.height as usize * c);
        for row in self.data.chunks_exact(row_len) {
            data.extend_from_slice(&row[..dst as usize * c]);
            data.extend_from_slice(&row[src1 as usize * c..src2 as usize * c]);
            data.extend_from_slice(&row[dst as usize * c..]);
        }
        Raster {
            width: new_width,
            height: self.height,
            channels: self.channels,
            data,
        }
    }

    /// Removes the rows `[y1, y2)`; everything below moves up.
    pub fn remove_rows(&self, y1: u32, y2: u32) -> Raster {
        assert!(y1 <= y2 && y2 <= self.height);
        let row_len = self.width as usize * self.channels as usize;
        let mut data = Vec::with_capacity(self.data.len() - (y2 - y1) as usize * row_len);
        data.extend_from_slice(&self.data[..y1 as usize * row_len]);
        data.extend_from_slice(&self.data[y2 as usize * row_len..]);
        Raster {
            width: self.width,
            height: self.height - (y2 - y1),
            channels: self.channels,
            data,
        }
    }

    /// Row counterpart of [`Raster::splice_columns`].
    pub fn splice_rows(&self, src1: u32, src2: u32, dst: u32) -> Raster {
        assert!(src1 <= src2 && src2 <= self.height && dst <= self.height);
        let row_len = self.width as usize * self.channels as usize;
        let mut data = Vec::with_capacity(self.data.len() + (src2 - src1) as usize * row_len);
        data.extend_from_slice(&self.data[..dst as usize * row_len]);
        data.extend_from_slice(&self.data[src1 as usize * row_len..src2 as usize * row_len]);
        data.extend_from_slice(&self.data[dst as usize * row_len..]);
        Raster {
            width: self.width,
            height: self.height + (src2 - src1),
            channels: self.channels,
            data,
        }
    }

    /// Sub-image `[x, x+w) × [y, y+h)`.
    pub fn crop(&self, x: u32, y: u32, w: u32, h: u32) -> Raster {
        assert!(x + w <= self.width && y + h <= self.height);
        let c = self.channels as usize;
        let mut data = Vec::with_capacity(w as usize * h as usize * c);
        for yy in y..y + h {
            let a = self.offset(x, yy);
            data.extend_from_slice(&self.data[a..a + w as usize * c]);
        }
        Raster {
            width: w,
            height: h,
            channels: self.channels,
            data,
        }
    }

    /// Swaps the x and y axes.
    pub fn transpose(&self) -> Raster {
        let c = self.channels as usize;
        let mut out = Raster::filled(self.height, self.width, self.channels, 0);
        for y in 0..self.height {
            for x in 0..self.width {
                let src = self.offset(x, y);
                let dst = out.offset(y, x);
                out.data[dst..dst + c].copy_from_slice(&self.data[src..src + c]);
            }
        }
        out
    }

    pub fn load_png(path: &Path) -> Result<Raster> {
        let img = image::open(path).map_err(|source| Error::Image {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Raster::from_dynamic(img))
    }

    pub fn from_dynamic(img: DynamicImage) -> Raster {
        match img {
            DynamicImage::ImageLuma8(g) => {
                let (w, h) = g.dimensions();
                Raster {
                    width: w,
                    height: h,
                    channels: 1,
                    data: g.into_raw(),
                }
            }
            DynamicImage::ImageLumaA8(_) | DynamicImage::ImageLuma16(_) | DynamicImage::ImageLumaA16(_) => {
                Raster::from_dynamic(DynamicImage::ImageLuma8(img.to_luma8()))
            }
            other => {
                let rgb = other.to_rgb8();
                let (w, h) = rgb.dimensions();
                Raster {
                    width: w,
                    height: h,
                    channels: 3,
                    data: rgb.into_raw(),
                }
            }
        }
    }

    pub fn to_dynamic(&self) -> DynamicImage {
        match self.channels {
            1 => DynamicImage::ImageLuma8(
                GrayImage::from_raw(self.width, self.height, self.data.clone()).expect("size checked"),
            ),
            _ => DynamicImage::ImageRgb8(
                RgbImage::from_raw(self.width, self.height, self.data.clone()).expect("size checked"),
            ),
        }
    }

    /// Encodes as PNG. Output bytes depend only on pixel content.
    pub fn encode_png(&self) -> Vec<u8> {
        let mut buf = std::io::Cursor::new(Vec::new());
        self.to_dynamic()
            .write_to(&mut buf, image::ImageFormat::Png)
            .expect("in-memory PNG encoding");
        buf.into_inner()
    }

    pub fn save_png(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.encode_png()).map_err(|e| Error::io(path, e))
    }
}
