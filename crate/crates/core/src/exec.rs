//! Execution policy for the embarrassingly parallel loops (constraint
//! subsets, sweep rows, random verification cases).
//!
//! With the `parallel` feature (default) work is spread over the rayon pool.
//! Without it only [`Exec::Sequential`] exists. Both paths return results in
//! input order, so reports are identical regardless of policy.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Guard and execution settings shared by the enumeration-heavy operations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Settings {
    pub exec: Exec,
    /// Largest network (in nodes) that exhaustive enumeration accepts.
    pub node_limit: usize,
    pub override_guard: bool,
}

pub const DEFAULT_NODE_LIMIT: usize = 10;

impl Default for Settings {
    fn default() -> Self {
        Self {
            exec: Exec::default(),
            node_limit: DEFAULT_NODE_LIMIT,
            override_guard: false,
        }
    }
}

impl Settings {
    pub fn sequential() -> Self {
        Self {
            exec: Exec::Sequential,
            ..Self::default()
        }
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub fn with_override(mut self, override_guard: bool) -> Self {
        self.override_guard = override_guard;
        self
    }

    pub(crate) fn check_guard(&self, nodes: usize) -> crate::Result<()> {
        if nodes > self.node_limit && !self.override_guard {
            return Err(crate::Error::GuardExceeded {
                nodes,
                limit: self.node_limit,
            });
        }
        Ok(())
    }
}

pub(crate) fn try_map<T, R, E, F>(exec: Exec, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    match exec {
        Exec::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => items.par_iter().map(f).collect(),
    }
}
