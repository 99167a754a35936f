//! Time-ordered event queue with lazy invalidation.
//!
//! Every particle carries a counter that is bumped whenever its trajectory
//! changes. Events remember the counters they were scheduled with and are
//! discarded on pop if either no longer matches.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Collision {
        a: usize,
        b: usize,
        count_a: u64,
        count_b: u64,
    },
    /// Re-predict a particle's events before its straight-line flight can
    /// reach a different periodic image.
    Renew { a: usize, count_a: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct Event {
    pub time: f64,
    /// Insertion order; breaks ties between equal times deterministically.
    seq: u64,
    pub kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Reversed so that the max-heap yields the earliest event.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

#[derive(Debug, Default, Clone)]
pub struct EventQueue {
    heap: BinaryHeap<Event>,
    next_seq: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, time: f64, kind: EventKind) {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Event { time, seq, kind });
    }

    /// Drops stale events from the front and returns the earliest live one.
    pub fn peek_valid(&mut self, counters: &[u64]) -> Option<&Event> {
        while let Some(top) = self.heap.peek() {
            if is_live(&top.kind, counters) {
                break;
            }
            self.heap.pop();
        }
        self.heap.peek()
    }

    pub fn pop_valid(&mut self, counters: &[u64]) -> Option<Event> {
        self.peek_valid(counters)?;
        self.heap.pop()
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

fn is_live(kind: &EventKind, counters: &[u64]) -> bool {
    match *kind {
        EventKind::Collision {
            a,
            b,
            count_a,
            count_b,
        } => counters[a] == count_a && counters[b] == count_b,
        EventKind::Renew { a, count_a } => counters[a] == count_a,
    }
}
