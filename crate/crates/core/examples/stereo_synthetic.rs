//! Persistent labelling of a synthetic stereo pair; writes the label map to the temp directory.
use kpip::kcore::Rat;
use kpip::labeling::{persistent_report, stereo_instance, synthetic_pair, write_ppm, StereoParams};
use kpip::potts::Route;

fn main() -> kpip::Result<()> {
    let (w, h) = (32, 24);
    let (pair, _truth) = synthetic_pair(w, h, 0, 3, 0);
    for lambda in [1, 20] {
        let params = StereoParams::new(4, Rat::from_integer(lambda));
        let inst = stereo_instance(&pair, &params)?;
        let report = persistent_report(&inst, Route::Direct, true)?;
        println!("lambda {lambda}: {}", serde_json::to_string(&report.stats_json()).unwrap());
        let path = std::env::temp_dir().join(format!("kpip_labels_{lambda}.ppm"));
        write_ppm(&report.label_map(w, h), &path)?;
        println!("  map written to {}", path.display());
    }
    Ok(())
}
