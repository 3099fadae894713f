//! Test problems and the external simulator adapter.

mod external;
mod quadratic;
mod tp1;
mod tp3;
mod tp4;

pub use external::{format_request, parse_handshake, parse_reply, ExternalSim, DEFAULT_TIMEOUT};
pub use quadratic::NoisyQuadratic;
pub use tp1::{InitialInventory, Tp1, Tp1Config, TP1_REFERENCE_OPTIMUM, TP1_REFERENCE_SOLUTION};
pub use tp3::{tp3_true, Tp3, TP3_OPTIMUM};
pub use tp4::{tp4_component, tp4_true, Tp4, Tp4Config};
