//! Addressable pairing heap.
//!
//! Nodes are stored densely in a vector and linked as a leftmost-child /
//! right-sibling tree. Insertion and melding are O(1), `pop_min` and `delete`
//! are O(log n) amortized. Keys are `f64` ordered together with the insertion
//! sequence number, so equal keys pop in FIFO order.

use crate::error::{MowspError, Result};

const NIL: u32 = u32::MAX;

/// Binds an inserted item to its heap slot. Becomes stale once the item is
/// popped or deleted; slots are recycled but a generation counter keeps old
/// handles from aliasing new items.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeapHandle {
    index: u32,
    generation: u32,
}

#[derive(Debug, Clone)]
struct Node<T> {
    key: f64,
    seq: u64,
    item: Option<T>,
    child: u32,
    sibling: u32,
    // parent when this is the leftmost child, left sibling otherwise
    prev: u32,
    generation: u32,
}

#[derive(Debug, Clone)]
pub struct PairingHeap<T> {
    nodes: Vec<Node<T>>,
    free: Vec<u32>,
    root: u32,
    len: usize,
    next_seq: u64,
    scratch: Vec<u32>,
}

impl<T> Default for PairingHeap<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> PairingHeap<T> {
    pub fn new() -> Self {
        PairingHeap {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NIL,
            len: 0,
            next_seq: 0,
            scratch: Vec::new(),
        }
    }

    pub fn with_capacity(capacity: usize) -> Self {
        let mut heap = Self::new();
        heap.nodes.reserve(capacity);
        heap
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Drops every item. Outstanding handles become stale.
    pub fn clear(&mut self) {
        for (i, node) in self.nodes.iter_mut().enumerate() {
            if node.item.take().is_some() {
                node.generation = node.generation.wrapping_add(1);
                self.free.push(i as u32);
            }
        }
        self.root = NIL;
        self.len = 0;
    }

    pub fn insert(&mut self, key: f64, item: T) -> Result<HeapHandle> {
        if !key.is_finite() {
            return Err(MowspError::input(format!("heap key {key} is not finite")));
        }
        let seq = self.next_seq;
        self.next_seq += 1;
        let index = match self.free.pop() {
            Some(i) => {
                let node = &mut self.nodes[i as usize];
                node.key = key;
                node.seq = seq;
                node.item = Some(item);
                node.child = NIL;
                node.sibling = NIL;
                node.prev = NIL;
                i
            }
            None => {
                self.nodes.push(Node {
                    key,
                    seq,
                    item: Some(item),
                    child: NIL,
                    sibling: NIL,
                    prev: NIL,
                    generation: 0,
                });
                (self.nodes.len() - 1) as u32
            }
        };
        self.root = self.meld(self.root, index);
        self.len += 1;
        Ok(HeapHandle {
            index,
            generation: self.nodes[index as usize].generation,
        })
    }

    pub fn peek_min(&self) -> Option<(f64, &T)> {
        (self.root != NIL).then(|| {
            let n = &self.nodes[self.root as usize];
            (n.key, n.item.as_ref().expect("root is occupied"))
        })
    }

    pub fn pop_min(&mut self) -> Result<(f64, T)> {
        if self.root == NIL {
            return Err(MowspError::State("pop from an empty heap".into()));
        }
        let r = self.root;
        let children = self.nodes[r as usize].child;
        self.root = self.merge_pairs(children);
        Ok(self.release(r))
    }

    pub fn delete(&mut self, handle: HeapHandle) -> Result<T> {
        if !self.contains(handle) {
            return Err(MowspError::logic("stale heap handle"));
        }
        let h = handle.index;
        if h == self.root {
            let children = self.nodes[h as usize].child;
            self.root = self.merge_pairs(children);
        } else {
            let (prev, sibling) = {
                let n = &self.nodes[h as usize];
                (n.prev, n.sibling)
            };
            if self.nodes[prev as usize].child == h {
                self.nodes[prev as usize].child = sibling;
            } else {
                self.nodes[prev as usize].sibling = sibling;
            }
            if sibling != NIL {
                self.nodes[sibling as usize].prev = prev;
            }
            let children = self.nodes[h as usize].child;
            let sub = self.merge_pairs(children);
            self.root = self.meld(self.root, sub);
        }
        Ok(self.release(h).1)
    }

    pub fn contains(&self, handle: HeapHandle) -> bool {
        self.nodes
            .get(handle.index as usize)
            .is_some_and(|n| n.generation == handle.generation && n.item.is_some())
    }

    /// Key currently stored for a live handle.
    pub fn key(&self, handle: HeapHandle) -> Option<f64> {
        self.contains(handle)
            .then(|| self.nodes[handle.index as usize].key)
    }

    fn release(&mut self, index: u32) -> (f64, T) {
        let node = &mut self.nodes[index as usize];
        let item = node.item.take().expect("released node is occupied");
        node.generation = node.generation.wrapping_add(1);
        node.child = NIL;
        node.sibling = NIL;
        node.prev = NIL;
        self.free.push(index);
        self.len -= 1;
        (node.key, item)
    }

    #[inline]
    fn less(&self, a: u32, b: u32) -> bool {
        let (x, y) = (&self.nodes[a as usize], &self.nodes[b as usize]);
        x.key < y.key || (x.key == y.key && x.seq < y.seq)
    }

    /// Links two detached roots; returns the new root.
    fn meld(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let (top, sub) = if self.less(b, a) { (b, a) } else { (a, b) };
        let first = self.nodes[top as usize].child;
        {
            let s = &mut self.nodes[sub as usize];
            s.sibling = first;
            s.prev = top;
        }
        if first != NIL {
            self.nodes[first as usize].prev = sub;
        }
        let t = &mut self.nodes[top as usize];
        t.child = sub;
        t.sibling = NIL;
        t.prev = NIL;
        top
    }

    /// Standard two-pass combine of a sibling list.
    fn merge_pairs(&mut self, first: u32) -> u32 {
        if first == NIL {
            return NIL;
        }
        let mut list = std::mem::take(&mut self.scratch);
        list.clear();
        let mut cur = first;
        while cur != NIL {
            let next = self.nodes[cur as usize].sibling;
            let n = &mut self.nodes[cur as usize];
            n.sibling = NIL;
            n.prev = NIL;
            list.push(cur);
            cur = next;
        }
        let mut paired = 0;
        let mut i = 0;
        while i < list.len() {
            let m = if i + 1 < list.len() {
                self.meld(list[i], list[i + 1])
            } else {
                list[i]
            };
            list[paired] = m;
            paired += 1;
            i += 2;
        }
        let mut root = list[paired - 1];
        for j in (0..paired - 1).rev() {
            root = self.meld(list[j], root);
        }
        self.scratch = list;
        root
    }
}
