//! Unit lifecycle, store layout, batch assembly, custody, and the sync
//! sweep.

mod batch;
mod custody;
mod state;
mod store;
mod sync;

pub use batch::{create_batch, load_batch, Batch, BatchError, BatchStatus};
pub use custody::{record_custody, CustodyError, CustodyEvent, CustodyLedger};
pub use state::{advance, IllegalTransition, LifecycleEvent, UnitState};
pub use store::{StateRecord, Store, STATE_FILE};
pub use sync::{advance_on_report, sync_once, SyncFailure, SyncSummary};
