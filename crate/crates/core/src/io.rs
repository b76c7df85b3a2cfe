//! 8-bit PNG reading and writing for rasters, maps, masks and label images.

use std::path::Path;

use image::{DynamicImage, GrayImage, ImageBuffer, Luma};

use crate::raster::{quantize, BinaryMask, Raster, SaliencyMap};
use crate::superpixel::SuperpixelLabeling;
use crate::{Error, Result};

fn open(path: &Path) -> Result<DynamicImage> {
    if !path.exists() {
        return Err(Error::io(
            path,
            std::io::Error::new(std::io::ErrorKind::NotFound, "file not found"),
        ));
    }
    image::open(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

fn save(img: &GrayImage, path: &Path) -> Result<()> {
    ensure_parent(path)?;
    img.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    Ok(())
}

/// Loads an image as gray (1 channel) or RGB (3 channels); alpha is dropped.
pub fn load_raster(path: &Path) -> Result<Raster> {
    let img = open(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if img.color().has_color() {
        let data = img.to_rgb8().into_raw().into_iter().map(|v| v as f32 / 255.0).collect();
        Raster::new(w, h, 3, data)
    } else {
        let data = img.to_luma8().into_raw().into_iter().map(|v| v as f32 / 255.0).collect();
        Raster::new(w, h, 1, data)
    }
}

/// Loads a grayscale map with values divided by 255 (no normalization).
pub fn load_map(path: &Path) -> Result<SaliencyMap> {
    let img = open(path)?.to_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    SaliencyMap::new(w, h, img.into_raw().into_iter().map(|v| v as f32 / 255.0).collect())
}

/// Loads a mask; gray values above 127 are object pixels.
pub fn load_mask(path: &Path) -> Result<BinaryMask> {
    let img = open(path)?.to_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    BinaryMask::new(w, h, img.into_raw().into_iter().map(|v| v > 127).collect())
}

pub fn save_mask(mask: &BinaryMask, path: &Path) -> Result<()> {
    let data = mask.bits().iter().map(|&b| if b { 255 } else { 0 }).collect();
    let img = GrayImage::from_raw(mask.width() as u32, mask.height() as u32, data)
        .expect("buffer length matches mask dimensions");
    save(&img, path)
}

pub fn save_map(map: &SaliencyMap, path: &Path) -> Result<()> {
    let img = GrayImage::from_raw(map.width() as u32, map.height() as u32, map.quantized())
        .expect("buffer length matches map dimensions");
    save(&img, path)
}

pub fn save_raster(raster: &Raster, path: &Path) -> Result<()> {
    ensure_parent(path)?;
    let bytes: Vec<u8> = raster.data().iter().map(|&v| quantize(v)).collect();
    let (w, h) = (raster.width() as u32, raster.height() as u32);
    let res = if raster.channels() == 3 {
        image::RgbImage::from_raw(w, h, bytes)
            .expect("buffer length matches raster dimensions")
            .save(path)
    } else {
        GrayImage::from_raw(w, h, bytes)
            .expect("buffer length matches raster dimensions")
            .save(path)
    };
    res.map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes a 16-bit label image plus a `label,pixel_count` sidecar next to it
/// (same stem, `.txt` extension).
pub fn save_labels(labeling: &SuperpixelLabeling, path: &Path) -> Result<()> {
    if labeling.segment_count() > u16::MAX as usize + 1 {
        return Err(Error::InvalidArgument(format!(
            "{} segments do not fit a 16-bit label image",
            labeling.segment_count()
        )));
    }
    ensure_parent(path)?;
    let data: Vec<u16> = labeling.labels().iter().map(|&l| l as u16).collect();
    let img: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(labeling.width() as u32, labeling.height() as u32, data)
            .expect("buffer length matches labeling dimensions");
    img.save(path).map_err(|source| Error::Image {
        path: path.to_path_buf(),
        source,
    })?;

    let mut sidecar = String::from("label,pixel_count\n");
    for (label, size) in labeling.sizes().iter().enumerate() {
        sidecar.push_str(&format!("{label},{size}\n"));
    }
    let side = path.with_extension("txt");
    std::fs::write(&side, sidecar).map_err(|e| Error::io(&side, e))
}
