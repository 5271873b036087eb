//! Retinal layer attribution for OCT classifiers.
//!
//! The pipeline turns a GradCAM saliency map and a nine-class retinal layer
//! segmentation into the percentage of model focus on each of the seven
//! layers between the inner limiting membrane and the retinal pigment
//! epithelium. Per-class profiles of those percentages, built from correct
//! predictions, then let a new prediction be scored: an explanation that sits
//! many standard deviations away from its predicted class's profile is
//! flagged for review.
//!
//! ```
//! use relax::{layer_attribution, LabelMap, Saliency};
//!
//! let labels = LabelMap::from_rows(&[&[0, 0], &[1, 2], &[8, 8]])?;
//! let saliency = Saliency::from_rows(&[&[1.0, 1.0], &[0.3, 0.1], &[0.5, 0.5]])?;
//! let r = layer_attribution(&saliency, &labels)?;
//! assert!((r.values()[0] - 75.0).abs() < 1e-9);
//! # Ok::<(), relax::Error>(())
//! ```

pub mod attribution;
pub mod class;
pub mod cli;
pub mod error;
pub mod formats;
pub mod gradcam;
pub mod heatmap;
pub mod histogram;
pub mod labelmap;
pub mod metrics;
pub mod oracle;
pub mod overlay;
pub mod profile;
pub mod resize;
pub mod synth;
pub mod tensor;
pub mod weights;

pub use attribution::{
    attribution_from_masses, layer_attribution, layer_attribution_at_label_resolution,
    layer_masses, LayerAttribution, LayerMasses,
};
pub use class::Class;
pub use error::{Error, Result};
pub use gradcam::{
    compute_saliency, gradcam_coarse, neuron_weights, normalize_minmax, NeuronWeights,
};
pub use heatmap::{Heatmap, Saliency};
pub use histogram::{deviation_histogram, Histogram, DEFAULT_BIN_WIDTH};
pub use labelmap::{read_labelmap, write_labelmap, LabelMap, Layer};
pub use metrics::{confusion, metrics, ConfusionMatrix, MetricsSummary};
pub use overlay::{render_overlay, Base, RgbImage};
pub use profile::{
    build_profiles, deviation_report, flag, AttributionRecord, ClassProfile, DeviationReport,
    FlagDecision, ProfileSet, StdKind, DEFAULT_FLAG_THRESHOLD,
};
pub use resize::resize_bilinear;
pub use tensor::{read_tensor, write_tensor, Tensor};
pub use weights::{class_weights, ClassWeights};
