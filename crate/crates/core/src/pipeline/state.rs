//! The unit lifecycle state machine.
//!
//! A unit moves along one axis — described, checked, validated, approved,
//! batched, scanned, mapped, exported — and any validation failure sends it
//! back to description. Transitions outside the table are illegal.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum UnitState {
    Created,
    MetricFilled,
    InDescription,
    Checked,
    Validated,
    Accepted,
    Batched,
    Scanned,
    Mapped,
    Exported,
}

impl UnitState {
    pub const ALL: [UnitState; 10] = [
        UnitState::Created,
        UnitState::MetricFilled,
        UnitState::InDescription,
        UnitState::Checked,
        UnitState::Validated,
        UnitState::Accepted,
        UnitState::Batched,
        UnitState::Scanned,
        UnitState::Mapped,
        UnitState::Exported,
    ];
}

impl fmt::Display for UnitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// What happened to a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LifecycleEvent {
    MetricComplete,
    RowsAdded,
    Program1Clean,
    Program2Accepted,
    CuratorApproval,
    BatchInclusion,
    ScansArrived,
    CoverageClean,
    ExportDone,
    /// Any validation failure, incremental or batch.
    ValidationFailed,
}

impl LifecycleEvent {
    pub const ALL: [LifecycleEvent; 10] = [
        LifecycleEvent::MetricComplete,
        LifecycleEvent::RowsAdded,
        LifecycleEvent::Program1Clean,
        LifecycleEvent::Program2Accepted,
        LifecycleEvent::CuratorApproval,
        LifecycleEvent::BatchInclusion,
        LifecycleEvent::ScansArrived,
        LifecycleEvent::CoverageClean,
        LifecycleEvent::ExportDone,
        LifecycleEvent::ValidationFailed,
    ];
}

impl fmt::Display for LifecycleEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("event {event} is illegal in state {state}")]
pub struct IllegalTransition {
    pub state: UnitState,
    pub event: LifecycleEvent,
}

/// The transition table. Everything not listed is illegal.
pub fn advance(state: UnitState, event: LifecycleEvent) -> Result<UnitState, IllegalTransition> {
    use LifecycleEvent as E;
    use UnitState as S;
    let next = match (state, event) {
        (S::Created, E::MetricComplete) => S::MetricFilled,
        (S::MetricFilled, E::RowsAdded) => S::InDescription,
        (S::InDescription, E::RowsAdded) => S::InDescription,
        (S::InDescription, E::Program1Clean) => S::Checked,
        (S::Checked, E::Program2Accepted) => S::Validated,
        (S::Validated, E::CuratorApproval) => S::Accepted,
        (S::Accepted, E::BatchInclusion) => S::Batched,
        (S::Batched, E::ScansArrived) => S::Scanned,
        (S::Scanned, E::CoverageClean) => S::Mapped,
        (S::Mapped, E::ExportDone) => S::Exported,
        // a failed validation re-opens description from anywhere it can run
        (
            S::InDescription | S::Checked | S::Validated | S::Accepted | S::Batched | S::Scanned
            | S::Mapped,
            E::ValidationFailed,
        ) => S::InDescription,
        _ => return Err(IllegalTransition { state, event }),
    };
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_edge() {
        assert_eq!(
            advance(UnitState::Created, LifecycleEvent::MetricComplete),
            Ok(UnitState::MetricFilled)
        );
    }

    #[test]
    fn rejection_reopens_description() {
        assert_eq!(
            advance(UnitState::Checked, LifecycleEvent::ValidationFailed),
            Ok(UnitState::InDescription)
        );
    }

    #[test]
    fn scans_cannot_arrive_before_batching() {
        assert_eq!(
            advance(UnitState::Created, LifecycleEvent::ScansArrived),
            Err(IllegalTransition { state: UnitState::Created, event: LifecycleEvent::ScansArrived })
        );
    }

    #[test]
    fn happy_path_runs_end_to_end() {
        use LifecycleEvent as E;
        let mut state = UnitState::Created;
        for event in [
            E::MetricComplete,
            E::RowsAdded,
            E::Program1Clean,
            E::Program2Accepted,
            E::CuratorApproval,
            E::BatchInclusion,
            E::ScansArrived,
            E::CoverageClean,
            E::ExportDone,
        ] {
            state = advance(state, event).unwrap();
        }
        assert_eq!(state, UnitState::Exported);
    }

    #[test]
    fn exported_is_terminal() {
        for event in LifecycleEvent::ALL {
            assert!(advance(UnitState::Exported, event).is_err());
        }
    }
}
