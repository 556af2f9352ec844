use super::{GeneratorSet, NodeId, Setting, WitnessNode};
use crate::ring::Poly;

/// The exchange form of a witness: an untrusted node list plus the claimed
/// conclusion. Nothing about a `Certificate` is assumed to be valid until
/// [`check_certificate`](super::check_certificate) says so.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub version: u32,
    pub setting: Setting,
    /// Declared base symbols, in presentation order.
    pub symbols: Vec<String>,
    pub generators: GeneratorSet,
    pub claim: Poly,
    /// Node `i` has id `i`.
    pub nodes: Vec<WitnessNode>,
    pub root: NodeId,
}
