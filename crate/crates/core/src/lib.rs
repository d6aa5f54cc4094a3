//! Syndrome-coding steganography with graphical (cycle) codes.
//!
//! A connected graph defines a binary code: the fundamental circuits of a
//! spanning tree generate it and the fundamental cut-sets are its parity
//! checks. Message bits are hidden as the syndrome of each block of cover
//! bits, changing a block by its coset leader so that at most the covering
//! radius of the code is flipped.
//!
//! * [`gf2`]: bit vectors and matrices over GF(2)
//! * [`graph`], [`codebook`]: graphs, spanning trees, code construction
//! * [`decoder`]: coset-leader tables (exhaustive and minimum `T`-join)
//! * [`codec`]: block and stream embedding / extraction, payload framing
//! * [`cover`]: PGM / BMP covers and their LSB plane
//! * [`comparison`]: rate / efficiency arithmetic for tabulated codes
//! * [`exec`]: parallel or sequential execution

pub mod codebook;
pub mod codec;
pub mod comparison;
pub mod cover;
pub mod decoder;
mod error;
pub mod exec;
pub mod gf2;
pub mod graph;

pub use codebook::Codebook;
pub use codec::{
    compute_metrics, embed_block, embed_stream, extract_block, extract_stream, frame_payload,
    unframe_payload, CodeReport, EmbedReport,
};
pub use cover::{load_image, lsb_extract, lsb_inject, peak_signal_noise, save_image, CoverImage};
pub use decoder::{
    build_coset_table, build_coset_table_bruteforce, build_coset_table_tjoin,
    covering_radius_bruteforce, covering_radius_tjoin, minimum_t_join, syndrome_to_terminals,
    CosetTable, TableBuilder, TerminalSet,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use gf2::{BitMatrix, BitVector};
pub use graph::{build_code, Graph, GraphicalCode, SpanningTree};
