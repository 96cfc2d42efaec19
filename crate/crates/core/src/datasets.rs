//! Bundled IFS files. The files under `data/` are the normative examples of
//! the text format.

use crate::codec::{parse_ifs, IfsDocument};

pub const FLOWER: &str = include_str!("../data/flower.ifs");
pub const MAPLE: &str = include_str!("../data/maple.ifs");
pub const SIERPINSKI: &str = include_str!("../data/sierpinski.ifs");

/// `(name, file text)` for every bundled system.
pub const ALL: [(&str, &str); 3] = [("flower", FLOWER), ("maple", MAPLE), ("sierpinski", SIERPINSKI)];

/// Looks up a bundled system by name.
pub fn bundled(name: &str) -> Option<IfsDocument> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_ifs(text).expect("bundled IFS files parse"))
}
