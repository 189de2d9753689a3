use thiserror::Error;

use crate::diagram::EdgeLabel;

/// Reasons a PD code cannot be turned into a supported diagram.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("malformed PD code: {0}")]
    MalformedPd(String),
    #[error("diagram has no crossings")]
    Empty,
    #[error("projection is disconnected ({pieces} pieces); split diagrams are not supported")]
    DisconnectedProjection { pieces: usize },
    #[error("a link component has no under-crossing; closed over-components are not supported")]
    ClosedOverComponent,
    #[error("traced {faces} faces, expected {expected} for a connected projection")]
    EulerViolation { faces: usize, expected: usize },
    #[error("edge {0} borders the same face on both sides")]
    BridgeDetected(EdgeLabel),
}

impl DiagramError {
    /// True for well-formed inputs that describe a diagram outside the supported class.
    pub fn is_unsupported(&self) -> bool {
        matches!(
            self,
            DiagramError::Empty
                | DiagramError::DisconnectedProjection { .. }
                | DiagramError::ClosedOverComponent
        )
    }
}

/// Search was abandoned before reaching an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search exceeded its time budget")]
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("strand {0} is already colored")]
    AlreadyColored(crate::diagram::StrandId),
}
