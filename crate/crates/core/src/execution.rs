use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Whether independent work items run on the rayon pool or on the caller's thread.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Maps `f` over `items`; output order always follows input order.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Execution::Parallel => items.par_iter().map(f).collect(),
            Execution::Sequential => items.iter().map(f).collect(),
        }
    }
}
