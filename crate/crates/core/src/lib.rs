//! Finite partition lattices, inverse limits of partition diagrams, the
//! ultrafilter/thread correspondence, and orbit dynamics over finite state
//! spaces.
//!
//! The pieces fit together as follows. [`partition`] provides ground sets,
//! (partial) partitions, the refinement order and its containment maps.
//! [`diagram`] turns finite families of label sets with arrows into inverse
//! families and enumerates their inverse limits exactly. [`ultrafilter`]
//! checks the ultrafilter axioms on explicit families and realizes the
//! bijection between ultrafilters on a finite set and threads of its full
//! partition diagram; [`fc`] carries the free-ultrafilter analogue inside the
//! finite/cofinite algebra on ℕ. [`dynamics`] applies the machinery to
//! orbits of finite self-maps: the blocks a trajectory visits infinitely
//! often always admit a coherent selection.

pub mod diagram;
pub mod dot;
pub mod dynamics;
pub mod error;
pub mod fc;
pub mod ground;
pub mod json;
pub mod partition;
pub mod sampling;
pub mod ultrafilter;

pub use diagram::{Arrow, Cone, Diagram, DiagramObject, FpDiagram, Thread};
pub use error::{Error, Result};
pub use ground::GroundSet;
pub use partition::{Block, Partition, RefinementMap, DEFAULT_SIZE_GUARD};
