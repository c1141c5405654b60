use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ImageFormat, ImageReader, Rgb, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kcore::Rat;
use crate::potts::{PottsInstance, Relaxation};

/// Left and right views of equal size.
#[derive(Clone, Debug)]
pub struct StereoPair {
    pub left: RgbImage,
    pub right: RgbImage,
}

impl StereoPair {
    pub fn new(left: RgbImage, right: RgbImage) -> Result<Self> {
        if left.dimensions() != right.dimensions() {
            return Err(Error::validation(format!(
                "stereo images differ in size: {:?} vs {:?}",
                left.dimensions(),
                right.dimensions()
            )));
        }
        if left.width() == 0 || left.height() == 0 {
            return Err(Error::validation("stereo images are empty"));
        }
        Ok(StereoPair { left, right })
    }

    pub fn width(&self) -> usize {
        self.left.width() as usize
    }

    pub fn height(&self) -> usize {
        self.left.height() as usize
    }

    pub fn load(left: &Path, right: &Path) -> Result<Self> {
        StereoPair::new(read_pnm(left)?, read_pnm(right)?)
    }
}

/// Reads a binary PPM (P6) or PGM (P5) file; gray images are widened to RGB.
pub fn read_pnm(path: &Path) -> Result<RgbImage> {
    let reader = ImageReader::open(path).map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    let mut reader = reader.with_guessed_format().map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    reader.set_format(ImageFormat::Pnm);
    let img = reader.decode().map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    Ok(img.to_rgb8())
}

/// Writes a binary PPM (P6).
pub fn write_ppm(img: &RgbImage, path: &Path) -> Result<()> {
    let fail = |e: &dyn std::fmt::Display| Error::validation(format!("{}: {e}", path.display()));
    let file = std::fs::File::create(path).map_err(|e| fail(&e))?;
    let enc = PnmEncoder::new(std::io::BufWriter::new(file)).with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary));
    img.write_with_encoder(enc).map_err(|e| fail(&e))
}

/// Largest possible squared RGB distance, used where no window pixel has a match.
pub const MAX_SSD: i128 = 3 * 255 * 255;

/// Averaged SSD costs `g_i(α)` for disparities `d_α = 2(α − 1)`, pixels in row-major order.
///
/// The window is clipped to pixels inside the image whose match `x − d_α` is inside too,
/// and the sum is averaged over that count. Rounding is half-up.
pub fn ssd_data_term(pair: &StereoPair, k: u8, radius: usize, round: bool) -> Vec<Vec<Rat>> {
    let (w, h) = (pair.width(), pair.height());
    let sq = |a: &Rgb<u8>, b: &Rgb<u8>| -> i128 { (0..3).map(|c| (a[c] as i128 - b[c] as i128).pow(2)).sum() };
    (0..w * h)
        .into_par_iter()
        .map(|i| {
            let (x, y) = (i % w, i / w);
            (1..=k)
                .map(|a| {
                    let d = 2 * (a as usize - 1);
                    let (mut sum, mut count) = (0i128, 0i128);
                    for yy in y.saturating_sub(radius)..=(y + radius).min(h - 1) {
                        for xx in x.saturating_sub(radius).max(d)..=(x + radius).min(w - 1) {
                            sum += sq(pair.left.get_pixel(xx as u32, yy as u32), pair.right.get_pixel((xx - d) as u32, yy as u32));
                            count += 1;
                        }
                    }
                    if count == 0 {
                        Rat::from_integer(MAX_SSD)
                    } else if round {
                        Rat::from_integer((2 * sum + count).div_euclid(2 * count))
                    } else {
                        Rat::new(sum, count)
                    }
                })
                .collect()
        })
        .collect()
}

/// Edges of the 8-connected grid, each listed once.
pub fn diagonal_grid(w: usize, h: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if x + 1 < w {
                out.push((i, i + 1));
            }
            if y + 1 < h {
                out.push((i, i + w));
                if x + 1 < w {
                    out.push((i, i + w + 1));
                }
                if x > 0 {
                    out.push((i, i + w - 1));
                }
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct StereoParams {
    pub k: u8,
    pub lambda: Rat,
    pub relaxation: Relaxation,
    pub round: bool,
    pub radius: usize,
}

impl StereoParams {
    pub fn new(k: u8, lambda: Rat) -> Self {
        StereoParams { k, lambda, relaxation: Relaxation::Average, round: true, radius: 4 }
    }
}

/// The relaxed Potts instance of a stereo pair.
pub fn stereo_instance(pair: &StereoPair, p: &StereoParams) -> Result<PottsInstance> {
    if p.k < 2 {
        return Err(Error::validation("stereo matching needs k ≥ 2"));
    }
    let (w, h) = (pair.width(), pair.height());
    let raw = ssd_data_term(pair, p.k, p.radius, p.round);
    let edges = diagonal_grid(w, h).into_iter().map(|(u, v)| (u, v, p.lambda)).collect();
    PottsInstance::from_raw(w * h, p.k, edges, raw, p.relaxation)
}

/// A textured right view and a left view shifted by a piecewise-constant disparity:
/// `d_fg` inside a centred rectangle and `d_bg` elsewhere. Returns the pair and the true
/// disparity of every pixel. A vertical strip of the right view has almost no contrast.
pub fn synthetic_pair(w: usize, h: usize, d_bg: usize, d_fg: usize, seed: u64) -> (StereoPair, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let column: Vec<[u8; 3]> = (0..w.div_ceil(2)).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect();
    let flat = |x: usize| x >= w / 3 && x < 2 * w / 3;
    let faint: Vec<u8> = (0..w * h).map(|_| 128 + rng.gen_range(0..2)).collect();
    let right = RgbImage::from_fn(w as u32, h as u32, |x, y| {
        if flat(x as usize) {
            let v = faint[y as usize * w + x as usize];
            return Rgb([v, v, v]);
        }
        let base = column[x as usize / 2];
        let band = if (y / 3) % 2 == 0 { 0 } else { 40 };
        Rgb([base[0].wrapping_add(band), base[1], base[2].wrapping_sub(band)])
    });
    let inside = |x: usize, y: usize| x >= w / 4 && x < w - w / 4 && y >= h / 4 && y < h - h / 4;
    let truth: Vec<usize> = (0..w * h).map(|i| if inside(i % w, i / w) { d_fg } else { d_bg }).collect();
    let left = RgbImage::from_fn(w as u32, h as u32, |x, y| {
        let d = truth[y as usize * w + x as usize];
        if (x as usize) >= d {
            *right.get_pixel(x - d as u32, y)
        } else if flat(x as usize) {
            Rgb([128, 128, 128])
        } else {
            Rgb([rng.gen(), rng.gen(), rng.gen()])
        }
    });
    (StereoPair { left, right }, truth)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_views_cost_nothing_at_zero_disparity() {
        let (pair, _) = synthetic_pair(12, 8, 0, 0, 1);
        let same = StereoPair::new(pair.right.clone(), pair.right.clone()).unwrap();
        assert!(ssd_data_term(&same, 3, 4, true).iter().all(|g| g[0] == Rat::from_integer(0)));
    }

    #[test]
    fn black_against_white_is_the_maximum_everywhere() {
        let black = RgbImage::from_pixel(6, 5, Rgb([0, 0, 0]));
        let white = RgbImage::from_pixel(6, 5, Rgb([255, 255, 255]));
        let pair = StereoPair::new(black, white).unwrap();
        for g in ssd_data_term(&pair, 2, 4, true) {
            assert!(g.iter().all(|&c| c == Rat::from_integer(MAX_SSD)));
        }
    }

    #[test]
    fn shifted_stripes_recover_the_shift_away_from_borders() {
        let (w, h) = (128, 40);
        let (pair, truth) = synthetic_pair(w, h, 2, 6, 5);
        let g = ssd_data_term(&pair, 4, 4, true);
        let (mut checked, mut fg) = (0, 0);
        for y in 4..h - 4 {
            for x in 10..w - 4 {
                let i = y * w + x;
                let uniform = (y - 4..=y + 4).all(|yy| (x - 4..=x + 4).all(|xx| truth[yy * w + xx] == truth[i]));
                let textured = (x - 4..=x + 4).all(|xx| (0..=6).all(|d| xx < d || !(xx - d >= w / 3 && xx - d < 2 * w / 3)));
                if !uniform || !textured {
                    continue;
                }
                let best = (0..4).min_by_key(|&a| (g[i][a], a)).unwrap();
                assert_eq!(2 * best, truth[i], "pixel ({x},{y})");
                checked += 1;
                fg += usize::from(truth[i] == 6);
            }
        }
        assert!(checked > 0 && fg > 0);
    }

    #[test]
    fn half_up_rounding() {
        let a = RgbImage::from_fn(2, 1, |x, _| if x == 0 { Rgb([1, 0, 0]) } else { Rgb([0, 0, 0]) });
        let b = RgbImage::from_pixel(2, 1, Rgb([0, 0, 0]));
        let pair = StereoPair::new(a, b).unwrap();
        let rounded = ssd_data_term(&pair, 1, 1, true);
        let exact = ssd_data_term(&pair, 1, 1, false);
        assert_eq!(exact[0][0], Rat::new(1, 2));
        assert_eq!(rounded[0][0], Rat::from_integer(1));
    }

    #[test]
    fn grid_degree() {
        let e = diagonal_grid(3, 3);
        assert_eq!(e.len(), 6 + 6 + 4 + 4);
        assert_eq!(e.iter().filter(|&&(u, v)| u == 4 || v == 4).count(), 8);
    }

    #[test]
    fn pnm_round_trip() {
        let (pair, _) = synthetic_pair(7, 5, 0, 2, 3);
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("l.ppm");
        write_ppm(&pair.left, &p).unwrap();
        assert_eq!(&std::fs::read(&p).unwrap()[..2], b"P6");
        assert_eq!(read_pnm(&p).unwrap(), pair.left);
    }
}
