//! Fast entropy coding for large alphabets by grouping unlikely letters.
//!
//! Letters are ranked by frequency and the tail of the ranking is cut into
//! groups whose members share one probability. The coder then only has to
//! resolve the group among `s` alternatives (`s` grows like `log N`), and the
//! position inside the group is a uniform value that costs a single division.
//!
//! * [`grouping`] computes the redundancy of a grouping and builds plans with
//!   the fewest groups for a redundancy budget.
//! * [`freq_order`] keeps the alphabet sorted by count with O(1) updates.
//! * [`model`] holds the adaptive grouped and plain models.
//! * [`ac`] is the range coder and the grouped/plain symbol codings.
//! * [`huffman`] is the static grouped Huffman code.
//! * [`container`] wraps everything into a self-describing stream.

pub mod ac;
pub mod bitio;
pub mod container;
pub mod error;
pub mod fenwick;
pub mod freq_order;
pub mod grouping;
pub mod huffman;
pub mod model;
pub mod sources;

pub use container::{compress, decompress, CodecConfig, CodingStats, Mode, StreamHeader};
pub use error::{Error, Result};
pub use freq_order::FrequencyOrder;
pub use grouping::{
    composed_redundancy_bound, grouping_redundancy, optimal_grouping, oracle_worst_case_redundancy,
    theorem3_grouping, worst_case_redundancy, GroupingPlan, OrderedDistribution,
};
pub use huffman::GroupedHuffmanCode;
pub use model::{GroupedModel, ModelConfig, PlainModel, Ratio, Smoothing};
pub use sources::Source;
