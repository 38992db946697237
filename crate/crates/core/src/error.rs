use thiserror::Error;

/// Error type shared across the library.
///
/// The variants map onto the CLI exit-code contract: malformed input is
/// distinguished from law/property violations and from resource guards.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    /// The two partitions are not comparable in the refinement order.
    #[error("not a refinement: block {block} has no unique containing block in the coarser partition")]
    Order { block: String },

    /// A two-block witness partition would have an empty cell.
    #[error("degenerate two-block partition: {0}")]
    Degenerate(String),

    #[error("resource guard exceeded: {what} is {actual}, guard is {limit}")]
    Resource {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    /// The inverse-family laws do not hold for a diagram.
    #[error("invalid diagram: {0}")]
    Diagram(String),

    /// Cone legs do not commute with the diagram arrows.
    #[error("invalid cone: {0}")]
    Cone(String),

    /// A candidate assignment is not a coherent thread.
    #[error("invalid thread: {0}")]
    Thread(String),
}

pub type Result<T> = std::result::Result<T, Error>;
