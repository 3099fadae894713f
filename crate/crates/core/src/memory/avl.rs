//! Arena-backed AVL map. Full memory never forgets a solution, so the map
//! supports lookup and insertion but no removal.

use std::cmp::Ordering;

const NIL: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Node<K, V> {
    key: K,
    value: V,
    left: usize,
    right: usize,
    height: i32,
}

#[derive(Debug, Clone)]
pub struct AvlMap<K, V> {
    nodes: Vec<Node<K, V>>,
    root: usize,
}

impl<K: Ord, V> Default for AvlMap<K, V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord, V> AvlMap<K, V> {
    pub fn new() -> Self {
        AvlMap { nodes: Vec::new(), root: NIL }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&V> {
        let mut cur = self.root;
        while cur != NIL {
            let node = &self.nodes[cur];
            cur = match key.cmp(&node.key) {
                Ordering::Less => node.left,
                Ordering::Greater => node.right,
                Ordering::Equal => return Some(&node.value),
            };
        }
        None
    }

    /// Inserts `key` unless present. Returns the stored value and whether
    /// the insertion happened; `make` only runs for a new key.
    pub fn get_or_insert_with(&mut self, key: K, make: impl FnOnce() -> V) -> (&V, bool) {
        // Record the search path so the rebalancing pass can walk back up
        // without parent links.
        let mut path = Vec::with_capacity(2 * (usize::BITS - self.len().leading_zeros()) as usize + 2);
        let mut cur = self.root;
        while cur != NIL {
            let node = &self.nodes[cur];
            match key.cmp(&node.key) {
                Ordering::Less => {
                    path.push((cur, Ordering::Less));
                    cur = node.left;
                }
                Ordering::Greater => {
                    path.push((cur, Ordering::Greater));
                    cur = node.right;
                }
                Ordering::Equal => return (&self.nodes[cur].value, false),
            }
        }

        let new = self.nodes.len();
        self.nodes.push(Node { key, value: make(), left: NIL, right: NIL, height: 1 });

        let mut child = new;
        while let Some((parent, side)) = path.pop() {
            match side {
                Ordering::Less => self.nodes[parent].left = child,
                _ => self.nodes[parent].right = child,
            }
            child = self.rebalance(parent);
        }
        self.root = child;
        (&self.nodes[new].value, true)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &V)> {
        let mut stack = Vec::new();
        let mut cur = self.root;
        std::iter::from_fn(move || {
            while cur != NIL {
                stack.push(cur);
                cur = self.nodes[cur].left;
            }
            let top = stack.pop()?;
            cur = self.nodes[top].right;
            Some((&self.nodes[top].key, &self.nodes[top].value))
        })
    }

    pub fn height(&self) -> i32 {
        self.h(self.root)
    }

    fn h(&self, n: usize) -> i32 {
        if n == NIL {
            0
        } else {
            self.nodes[n].height
        }
    }

    fn update(&mut self, n: usize) {
        let (l, r) = (self.nodes[n].left, self.nodes[n].right);
        self.nodes[n].height = 1 + self.h(l).max(self.h(r));
    }

    fn balance(&self, n: usize) -> i32 {
        self.h(self.nodes[n].left) - self.h(self.nodes[n].right)
    }

    fn rotate_right(&mut self, n: usize) -> usize {
        let l = self.nodes[n].left;
        self.nodes[n].left = self.nodes[l].right;
        self.nodes[l].right = n;
        self.update(n);
        self.update(l);
        l
    }

    fn rotate_left(&mut self, n: usize) -> usize {
        let r = self.nodes[n].right;
        self.nodes[n].right = self.nodes[r].left;
        self.nodes[r].left = n;
        self.update(n);
        self.update(r);
        r
    }

    fn rebalance(&mut self, n: usize) -> usize {
        self.update(n);
        let b = self.balance(n);
        if b > 1 {
            if self.balance(self.nodes[n].left) < 0 {
                let l = self.rotate_left(self.nodes[n].left);
                self.nodes[n].left = l;
            }
            self.rotate_right(n)
        } else if b < -1 {
            if self.balance(self.nodes[n].right) > 0 {
                let r = self.rotate_right(self.nodes[n].right);
                self.nodes[n].right = r;
            }
            self.rotate_left(n)
        } else {
            n
        }
    }

    /// Checks key order, stored heights and the AVL balance condition.
    pub fn audit(&self) -> Result<(), String> {
        let mut count = 0;
        self.audit_node(self.root, None, None, &mut count)?;
        if count != self.nodes.len() {
            return Err(format!("{} nodes reachable, {} stored", count, self.nodes.len()));
        }
        Ok(())
    }

    fn audit_node(
        &self,
        n: usize,
        lo: Option<&K>,
        hi: Option<&K>,
        count: &mut usize,
    ) -> Result<i32, String> {
        if n == NIL {
            return Ok(0);
        }
        *count += 1;
        let node = &self.nodes[n];
        if lo.is_some_and(|lo| node.key <= *lo) || hi.is_some_and(|hi| node.key >= *hi) {
            return Err(format!("node {n} violates key order"));
        }
        let lh = self.audit_node(node.left, lo, Some(&node.key), count)?;
        let rh = self.audit_node(node.right, Some(&node.key), hi, count)?;
        if (lh - rh).abs() > 1 {
            return Err(format!("node {n} has balance {}", lh - rh));
        }
        if node.height != 1 + lh.max(rh) {
            return Err(format!("node {n} stores height {}, actual {}", node.height, 1 + lh.max(rh)));
        }
        Ok(node.height)
    }
}
