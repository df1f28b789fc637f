//! Synthetic labeled corpora. Each class jitters the endpoints of a fixed
//! bar template, so classmates share bar positions and persistence up to
//! small noise. The feature map reads landscape profiles along the
//! filtration axis; classes therefore need position-coherent bars, not just
//! matching summary statistics, to come out as clusters.

use dlfm::barcode::{Bar, Barcode};
use dlfm::rng;
use rand::Rng;

/// One class per template: a dominant bar flanked by short ones, two medium
/// bars with a nested short one, and a train of short bars. Births stay
/// above the jitter radius so perturbed bars remain valid.
const TEMPLATES: [&[(f64, f64)]; 3] = [
    &[(0.25, 2.65), (0.55, 0.95), (1.75, 2.15)],
    &[(0.45, 1.65), (1.45, 2.65), (0.75, 1.15)],
    &[(0.25, 0.75), (0.75, 1.25), (1.25, 1.75), (1.75, 2.25), (2.25, 2.75)],
];

const JITTER: f64 = 0.05;

pub const CLASS_COUNT: usize = TEMPLATES.len();

pub struct SynthEntry {
    pub id: String,
    pub barcode: Barcode,
    pub label: String,
    pub depth: f64,
}

/// Generate `per_class` barcodes for each of the three classes. Every entry
/// derives its own substream from the seed, so the corpus is reproducible
/// and insensitive to generation order.
pub fn generate(seed: u64, per_class: usize) -> Vec<SynthEntry> {
    let mut out = Vec::with_capacity(3 * per_class);
    for (class, template) in TEMPLATES.iter().enumerate() {
        for item in 0..per_class {
            let mut r = rng::stream(seed, (class * per_class + item) as u64);
            let bars: Vec<Bar> = template
                .iter()
                .map(|&(birth, death)| {
                    Bar::new(
                        birth + r.gen_range(-JITTER..=JITTER),
                        death + r.gen_range(-JITTER..=JITTER),
                    )
                })
                .collect();
            let barcode = Barcode::new(bars).expect("jittered templates stay valid");
            let depth = barcode.bars().iter().map(Bar::persistence).sum::<f64>()
                / barcode.len() as f64;
            out.push(SynthEntry {
                id: format!("c{class}-{item}"),
                barcode,
                label: format!("class{class}"),
                depth,
            });
        }
    }
    out
}
