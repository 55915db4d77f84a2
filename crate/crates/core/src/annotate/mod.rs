//! Automatic labeling from gazetteers, synthetic noise channels and the
//! initializers for the noise-layer weights.

mod channel;
mod confusion;
mod gazetteer;

pub use channel::{
    apply_channel, ChannelConfig, ChannelError, ChannelKind, NoiseChannelSpec, ANNOTATION_SHAPED,
};
pub use confusion::{
    estimate_confusion, identity_init, init_noise_weights, pretrained_init,
    pretrained_init_from_predictions, ConfusionCounts, ConfusionError,
};
pub use gazetteer::{Gazetteer, GazetteerError, DEFAULT_BLOCKLIST};
