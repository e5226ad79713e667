//! Built-in demonstration channels.
//!
//! Two channels ship with the crate: a single-antenna instance whose
//! interference is strong enough to separate the classical sum-rate bound
//! from the superposition-coding one, and a mixed-antenna instance used by
//! the worked rate-region and rate-splitting examples.

use crate::channel::{channel_from_json, ChannelConfig};

/// JSON for the single-antenna strong-gap channel.
pub const EXAMPLE1_JSON: &str = include_str!("../fixtures/example1.json");

/// JSON for the mixed-antenna rate-region channel.
pub const EXAMPLE2_JSON: &str = include_str!("../fixtures/example2.json");

/// Single-antenna strong-gap channel (real gains 45/25/3/30, 0 dB powers).
pub fn example1() -> ChannelConfig {
    channel_from_json(EXAMPLE1_JSON).expect("bundled channel is valid")
}

/// Mixed-antenna rate-region channel (2x3 and 2x2 links, 8 to 20 dB powers).
pub fn example2() -> ChannelConfig {
    channel_from_json(EXAMPLE2_JSON).expect("bundled channel is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_channels_parse() {
        assert_eq!(example1().dims(), [1, 1, 1, 1]);
        assert_eq!(example2().dims(), [2, 3, 2, 2]);
    }
}
