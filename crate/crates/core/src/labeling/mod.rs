//! Persistent labelings of Potts energies and the stereo-matching pipeline.

mod stereo;

pub use stereo::{
    diagonal_grid, read_pnm, ssd_data_term, stereo_instance, synthetic_pair, write_ppm, StereoPair, StereoParams, MAX_SSD,
};

use image::{Rgb, RgbImage};
use serde_json::{json, Value as Json};

use crate::enumerate::{build_r_poset, count_maximal_minimizers, FactoredCount, RPoset};
use crate::error::Result;
use crate::kcore::{rat_to_string, KVector, Rat};
use crate::potts::{build_pip_potts, PottsInstance, PottsPip, Route};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PixelClass {
    /// Labeled by the minimum persistent labeling.
    Gray,
    /// Labeled by every maximal persistent labeling but not by the minimum one.
    Red,
    /// Unlabeled even by maximal persistent labelings.
    Blue,
}

#[derive(Clone, Debug)]
pub struct LabelReport {
    pub x_min: KVector,
    pub max_support: Vec<usize>,
    pub classes: Vec<PixelClass>,
    pub max_count: FactoredCount,
}

/// The support of every maximal minimizer, read off one maximal consistent ideal.
pub fn maximal_support(pp: &PottsPip, r: &RPoset) -> Result<Vec<usize>> {
    let ideal = r.lift(&[], &vec![0; r.choices.len()]);
    Ok(pp.minimizer(&ideal)?.support())
}

pub fn classify_pixels(x_min: &KVector, max_support: &[usize]) -> Vec<PixelClass> {
    let mut out = vec![PixelClass::Blue; x_min.n()];
    for &i in max_support {
        out[i] = PixelClass::Red;
    }
    for i in x_min.support() {
        out[i] = PixelClass::Gray;
    }
    out
}

pub fn persistent_report(inst: &PottsInstance, route: Route, parallel: bool) -> Result<LabelReport> {
    let pp = build_pip_potts(inst, route, parallel)?;
    report_from_pip(&pp)
}

pub fn report_from_pip(pp: &PottsPip) -> Result<LabelReport> {
    let r = build_r_poset(&pp.pip)?;
    let x_min = pp.minimum_minimizer().clone();
    let max_support = maximal_support(pp, &r)?;
    let classes = classify_pixels(&x_min, &max_support);
    Ok(LabelReport { x_min, max_support, classes, max_count: count_maximal_minimizers(&r) })
}

impl LabelReport {
    pub fn count(&self, c: PixelClass) -> usize {
        self.classes.iter().filter(|&&x| x == c).count()
    }

    /// Exact percentage of pixels in a class.
    pub fn percent(&self, c: PixelClass) -> Rat {
        Rat::new(100 * self.count(c) as i128, self.classes.len() as i128)
    }

    pub fn stats_json(&self) -> Json {
        let pct = |c| {
            let p = self.percent(c);
            json!({ "exact": rat_to_string(&p), "display": format!("{:.2}", display_hundredths(p)) })
        };
        json!({
            "pixels": self.classes.len(),
            "gray": self.count(PixelClass::Gray),
            "red": self.count(PixelClass::Red),
            "blue": self.count(PixelClass::Blue),
            "gray_pct": pct(PixelClass::Gray),
            "red_pct": pct(PixelClass::Red),
            "blue_pct": pct(PixelClass::Blue),
            "max_count_factored": self.max_count.to_json(),
        })
    }

    /// Gray levels spread over `[0, 255]` by label, red and blue as pure channels.
    pub fn label_map(&self, width: usize, height: usize) -> RgbImage {
        let k = self.x_min.k().max(2) as u32;
        RgbImage::from_fn(width as u32, height as u32, |x, y| {
            let i = y as usize * width + x as usize;
            match self.classes[i] {
                PixelClass::Gray => {
                    let g = (255 * (self.x_min.get(i) as u32 - 1) / (k - 1)) as u8;
                    Rgb([g, g, g])
                }
                PixelClass::Red => Rgb([255, 0, 0]),
                PixelClass::Blue => Rgb([0, 0, 255]),
            }
        })
    }
}

struct Hundredths(i128);

impl std::fmt::Display for Hundredths {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

fn display_hundredths(p: Rat) -> Hundredths {
    let scaled = p * Rat::from_integer(100);
    Hundredths(((scaled * Rat::from_integer(2) + Rat::from_integer(1)) / Rat::from_integer(2)).floor().to_integer())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::enumerate::maximal_minimizers_via_r;
    use crate::kcore::{brute_minimizer_set, maximal_elements};
    use crate::potts::Relaxation;

    fn r(v: i128) -> Rat {
        Rat::from_integer(v)
    }

    fn optimal_labelings(inst: &PottsInstance) -> Vec<Vec<u8>> {
        let k = inst.k as usize;
        let total = k.pow(inst.n as u32);
        let mut best: Option<Rat> = None;
        let mut out = Vec::new();
        for idx in 0..total {
            let labels: Vec<u8> = (0..inst.n).map(|i| (idx / k.pow(i as u32) % k) as u8 + 1).collect();
            let e = inst.energy(&labels).unwrap();
            match best {
                Some(b) if e > b => {}
                Some(b) if e == b => out.push(labels),
                _ => {
                    best = Some(e);
                    out = vec![labels];
                }
            }
        }
        out
    }

    fn random_raw(rng: &mut ChaCha8Rng, n: usize, k: u8, mode: Relaxation) -> PottsInstance {
        let w = rng.gen_range(1..=n);
        let edges: Vec<_> = diagonal_grid(w, n.div_ceil(w))
            .into_iter()
            .filter(|&(u, v)| u < n && v < n)
            .map(|(u, v)| (u, v, r(rng.gen_range(1..=3))))
            .collect();
        let raw = (0..n).map(|_| (0..k).map(|_| r(rng.gen_range(0..6))).collect()).collect();
        PottsInstance::from_raw(n, k, edges, raw, mode).unwrap()
    }

    fn persistent(inst: &PottsInstance) -> bool {
        let opt = optimal_labelings(inst);
        brute_minimizer_set(&inst.to_table())
            .iter()
            .all(|x| opt.iter().any(|y| x.support().iter().all(|&i| x.get(i) == y[i])))
    }

    #[test]
    fn unique_minimizer_has_no_red_or_blue() {
        let inst = PottsInstance::new(2, 2, vec![(0, 1, r(1))], vec![vec![r(0), r(-1), r(2)]; 2]).unwrap();
        let rep = persistent_report(&inst, Route::Direct, false).unwrap();
        assert_eq!(rep.count(PixelClass::Gray), 2);
        assert_eq!(rep.percent(PixelClass::Gray), r(100));
    }

    #[test]
    fn boundary_tie_leaves_a_red_pixel() {
        let raw = vec![vec![r(0), r(10)], vec![r(5), r(5)], vec![r(10), r(0)]];
        let edges = vec![(0, 1, r(1)), (1, 2, r(1))];
        let inst = PottsInstance::from_raw(3, 2, edges, raw, Relaxation::Average).unwrap();
        let rep = persistent_report(&inst, Route::Direct, false).unwrap();
        assert_eq!(rep.x_min.labels(), &[1, 0, 2]);
        assert_eq!(rep.classes, vec![PixelClass::Gray, PixelClass::Red, PixelClass::Gray]);
        assert_eq!(rep.max_count.total, 2u8.into());
        assert!(persistent(&inst));
    }

    #[test]
    fn single_tied_pixel_is_red() {
        let inst = PottsInstance::new(1, 2, vec![], vec![vec![r(0), r(0), r(0)]]).unwrap();
        let rep = persistent_report(&inst, Route::Direct, false).unwrap();
        assert_eq!(rep.classes, vec![PixelClass::Red]);
        let inst = PottsInstance::new(1, 3, vec![], vec![vec![r(0), r(1), r(1), r(1)]]).unwrap();
        let rep = persistent_report(&inst, Route::Direct, false).unwrap();
        assert_eq!(rep.classes, vec![PixelClass::Blue]);
    }

    #[test]
    fn classes_agree_with_full_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1abe1);
        for _ in 0..120 {
            let n = rng.gen_range(1..=6);
            let k = rng.gen_range(2..=3);
            let inst = random_raw(&mut rng, n, k, Relaxation::Average);
            let pp = build_pip_potts(&inst, Route::Direct, false).unwrap();
            let rep = report_from_pip(&pp).unwrap();
            let rp = build_r_poset(&pp.pip).unwrap();
            let maxes: Vec<KVector> = maximal_minimizers_via_r(&pp, &rp).map(|x| x.unwrap()).collect();
            let supports: BTreeSet<Vec<usize>> = maxes.iter().map(|x| x.support()).collect();
            assert_eq!(supports.len(), 1);
            assert_eq!(supports.into_iter().next().unwrap(), rep.max_support);
            let brute = maximal_elements(&brute_minimizer_set(&inst.to_table()));
            assert!(brute.iter().all(|x| x.support() == rep.max_support));
            let sum: Rat = [PixelClass::Gray, PixelClass::Red, PixelClass::Blue].iter().map(|&c| rep.percent(c)).sum();
            assert_eq!(sum, r(100));
        }
    }

    #[test]
    fn average_relaxation_is_persistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..80 {
            let n = rng.gen_range(1..=7);
            let k = rng.gen_range(2..=3);
            assert!(persistent(&random_raw(&mut rng, n, k, Relaxation::Average)));
        }
    }

    #[test]
    fn kovtun_relaxation_is_persistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..80 {
            let n = rng.gen_range(1..=7);
            let k = rng.gen_range(2..=3);
            assert!(persistent(&random_raw(&mut rng, n, k, Relaxation::Kovtun)));
        }
    }

    #[test]
    fn stats_json_has_exact_percentages() {
        let raw = vec![vec![r(0), r(10)], vec![r(5), r(5)], vec![r(10), r(0)]];
        let inst = PottsInstance::from_raw(3, 2, vec![(0, 1, r(1)), (1, 2, r(1))], raw, Relaxation::Average).unwrap();
        let j = persistent_report(&inst, Route::Direct, false).unwrap().stats_json();
        assert_eq!(j["gray_pct"]["exact"], "200/3");
        assert_eq!(j["gray_pct"]["display"], "66.67");
        assert_eq!(j["blue_pct"]["exact"], "0");
        assert_eq!(j["max_count_factored"]["total"], "2");
    }

    #[test]
    fn synthetic_stereo_report() {
        let (pair, _) = synthetic_pair(12, 9, 0, 2, 4);
        let inst = stereo_instance(&pair, &StereoParams::new(3, r(20))).unwrap();
        let rep = persistent_report(&inst, Route::Direct, true).unwrap();
        assert_eq!(rep.classes.len(), 108);
        let img = rep.label_map(12, 9);
        assert_eq!(img.dimensions(), (12, 9));
    }
}
