use thiserror::Error;

/// Errors produced by every operation in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported SVG feature: {0}")]
    UnsupportedFeature(String),
    #[error("malformed SVG document: {0}")]
    MalformedDocument(String),
    #[error("layer index {0} does not fit in 24 bits")]
    IndexOverflow(u64),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("depth map is empty")]
    EmptyMap,
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
    #[error("ground truth has no pixel pairs with distinct depth")]
    NoValidPairs,
    #[error("image too small: {0}")]
    TooSmall(String),
    #[error("bin edges must be strictly ascending")]
    UnsortedEdges,
    #[error("ground-truth path count is zero")]
    ZeroGroundTruth,
    #[error("rank {rank} out of range 1..={count}")]
    RankOutOfRange { rank: usize, count: usize },
    #[error("mask is empty")]
    EmptyMask,
    #[error("decode error: {0}")]
    Decode(String),
    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dims(w0: u32, h0: u32, w1: u32, h1: u32) -> Result<()> {
    if w0 != w1 || h0 != h1 {
        return Err(Error::DimensionMismatch(w0, h0, w1, h1));
    }
    Ok(())
}
