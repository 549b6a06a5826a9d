//! Finite-field multiple access: field arithmetic, element-pair codes,
//! multiplexing, binary channel codes, and the GMAC and DSC transceivers
//! with a Monte Carlo harness.

pub mod chancode;
pub mod ep_code;
pub mod error;
pub mod gf;
pub mod gmac;
pub mod harness;
pub mod multiplex;
pub mod net;
pub mod replay;

pub use chancode::{ChannelCode, CodeSpec, MinSumConfig};
pub use ep_code::{CodeKind, ElementPair, EpCode, UspmReport};
pub use error::{Error, Result};
pub use gf::{build_field, FieldElement, FieldSpec};
pub use gmac::{Detector, GmacConfig, GmacSystem, Layout, SnrAxis};
pub use harness::{Mode, SimulationConfig, StopRule, TrialResult};
pub use multiplex::MultiplexMatrix;
pub use net::{DscChannel, NetConfig, NetSystem, Vrb, VrbAssignment};
