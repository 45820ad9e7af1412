//! Per-group memo tables. Groups are interned and never freed, so the
//! address of the shared instance is a stable key.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use once_cell::sync::OnceCell;

use crate::grp::GroupRef;

pub(crate) struct GroupMemo<T> {
    cells: Mutex<HashMap<usize, Arc<OnceCell<Arc<T>>>>>,
}

impl<T> Default for GroupMemo<T> {
    fn default() -> Self {
        GroupMemo { cells: Mutex::new(HashMap::new()) }
    }
}

impl<T> GroupMemo<T> {
    fn cell(&self, g: &GroupRef) -> Arc<OnceCell<Arc<T>>> {
        let key = Arc::as_ptr(g) as usize;
        let mut map = self.cells.lock().expect("memo poisoned");
        map.entry(key).or_default().clone()
    }

    pub(crate) fn get_or_init(&self, g: &GroupRef, f: impl FnOnce() -> T) -> Arc<T> {
        self.cell(g).get_or_init(|| Arc::new(f())).clone()
    }
}
