//! Jamming beamformer synthesis and eavesdropping rate regions for a
//! full-duplex monitor watching two interfering suspicious links.
//!
//! The monitor jams with a rank-one covariance `w wᴴ` to pull the suspicious
//! rates inside the region it can decode. [`jammer`] builds the closed-form
//! beamformers, [`region`] assembles rate regions and their intersections,
//! and [`oracle`] checks the closed forms against brute-force searches.

pub mod error;
pub mod jammer;
pub mod linalg;
pub mod oracle;
pub mod rates;
pub mod region;
pub mod scenario;

pub use error::{Error, Result};
pub use jammer::{Beamformer, Jammer, NullSpaceJammer, RateExtremes, SweepConfig};
pub use linalg::{CMat, CVec, C64};
pub use rates::{DecodingOrder, Link, RatePair};
pub use region::{RateRegion, RegionKind, TimeSharePoint};
pub use scenario::{GenParams, Geometry, Scenario, ScenarioFile};
