//! Arena-backed red-black tree map (the textbook formulation with a shared
//! black sentinel at index 0). Freed slots are recycled.

use std::cmp::Ordering;

const NIL: usize = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Color {
    Red,
    Black,
}

#[derive(Debug, Clone)]
struct Node<K, V> {
    entry: Option<(K, V)>,
    color: Color,
    parent: usize,
    left: usize,
    right: usize,
}

#[derive(Debug, Clone)]
pub struct RbTree<K, V> {
    nodes: Vec<Node<K, V>>,
    free: Vec<usize>,
    root: usize,
    len: usize,
}

impl<K: Ord, V> Default for RbTree<K, V> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord, V> RbTree<K, V> {
    pub fn new() -> Self {
        RbTree {
            nodes: vec![Node { entry: None, color: Color::Black, parent: NIL, left: NIL, right: NIL }],
            free: Vec::new(),
            root: NIL,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn key(&self, n: usize) -> &K {
        &self.nodes[n].entry.as_ref().expect("live node").0
    }

    fn color(&self, n: usize) -> Color {
        self.nodes[n].color
    }

    fn set_color(&mut self, n: usize, c: Color) {
        self.nodes[n].color = c;
    }

    fn parent(&self, n: usize) -> usize {
        self.nodes[n].parent
    }

    fn left(&self, n: usize) -> usize {
        self.nodes[n].left
    }

    fn right(&self, n: usize) -> usize {
        self.nodes[n].right
    }

    fn find(&self, key: &K) -> usize {
        let mut x = self.root;
        while x != NIL {
            x = match key.cmp(self.key(x)) {
                Ordering::Less => self.left(x),
                Ordering::Greater => self.right(x),
                Ordering::Equal => return x,
            };
        }
        NIL
    }

    pub fn contains_key(&self, key: &K) -> bool {
        self.find(key) != NIL
    }

    pub fn get(&self, key: &K) -> Option<&V> {
        match self.find(key) {
            NIL => None,
            n => self.nodes[n].entry.as_ref().map(|(_, v)| v),
        }
    }

    fn minimum(&self, mut x: usize) -> usize {
        while self.left(x) != NIL {
            x = self.left(x);
        }
        x
    }

    pub fn first(&self) -> Option<(&K, &V)> {
        if self.root == NIL {
            return None;
        }
        self.nodes[self.minimum(self.root)].entry.as_ref().map(|(k, v)| (k, v))
    }

    pub fn pop_first(&mut self) -> Option<(K, V)> {
        if self.root == NIL {
            return None;
        }
        let z = self.minimum(self.root);
        Some(self.delete(z))
    }

    /// Returns `false` and leaves the tree unchanged if `key` is present.
    pub fn insert(&mut self, key: K, value: V) -> bool {
        let mut y = NIL;
        let mut x = self.root;
        let mut went_left = false;
        while x != NIL {
            y = x;
            match key.cmp(self.key(x)) {
                Ordering::Less => {
                    went_left = true;
                    x = self.left(x);
                }
                Ordering::Greater => {
                    went_left = false;
                    x = self.right(x);
                }
                Ordering::Equal => return false,
            }
        }
        let node = Node { entry: Some((key, value)), color: Color::Red, parent: y, left: NIL, right: NIL };
        let z = match self.free.pop() {
            Some(slot) => {
                self.nodes[slot] = node;
                slot
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        };
        if y == NIL {
            self.root = z;
        } else if went_left {
            self.nodes[y].left = z;
        } else {
            self.nodes[y].right = z;
        }
        self.insert_fixup(z);
        self.len += 1;
        true
    }

    pub fn remove(&mut self, key: &K) -> Option<V> {
        match self.find(key) {
            NIL => None,
            z => Some(self.delete(z).1),
        }
    }

    fn rotate_left(&mut self, x: usize) {
        let y = self.right(x);
        self.nodes[x].right = self.left(y);
        if self.left(y) != NIL {
            let yl = self.left(y);
            self.nodes[yl].parent = x;
        }
        self.replace_child(x, y);
        self.nodes[y].left = x;
        self.nodes[x].parent = y;
    }

    fn rotate_right(&mut self, x: usize) {
        let y = self.left(x);
        self.nodes[x].left = self.right(y);
        if self.right(y) != NIL {
            let yr = self.right(y);
            self.nodes[yr].parent = x;
        }
        self.replace_child(x, y);
        self.nodes[y].right = x;
        self.nodes[x].parent = y;
    }

    /// Puts `v` where `u` hangs from its parent. `v` may be the sentinel.
    fn replace_child(&mut self, u: usize, v: usize) {
        let p = self.parent(u);
        if p == NIL {
            self.root = v;
        } else if u == self.left(p) {
            self.nodes[p].left = v;
        } else {
            self.nodes[p].right = v;
        }
        self.nodes[v].parent = p;
    }

    fn insert_fixup(&mut self, mut z: usize) {
        while self.color(self.parent(z)) == Color::Red {
            let p = self.parent(z);
            let g = self.parent(p);
            if p == self.left(g) {
                let uncle = self.right(g);
                if self.color(uncle) == Color::Red {
                    self.set_color(p, Color::Black);
                    self.set_color(uncle, Color::Black);
                    self.set_color(g, Color::Red);
                    z = g;
                } else {
                    if z == self.right(p) {
                        z = p;
                        self.rotate_left(z);
                    }
                    let p = self.parent(z);
                    let g = self.parent(p);
                    self.set_color(p, Color::Black);
                    self.set_color(g, Color::Red);
                    self.rotate_right(g);
                }
            } else {
                let uncle = self.left(g);
                if self.color(uncle) == Color::Red {
                    self.set_color(p, Color::Black);
                    self.set_color(uncle, Color::Black);
                    self.set_color(g, Color::Red);
                    z = g;
                } else {
                    if z == self.left(p) {
                        z = p;
                        self.rotate_right(z);
                    }
                    let p = self.parent(z);
                    let g = self.parent(p);
                    self.set_color(p, Color::Black);
                    self.set_color(g, Color::Red);
                    self.rotate_left(g);
                }
            }
        }
        let root = self.root;
        self.set_color(root, Color::Black);
    }

    fn delete(&mut self, z: usize) -> (K, V) {
        let mut removed_color = self.color(z);
        let x;
        if self.left(z) == NIL {
            x = self.right(z);
            self.replace_child(z, x);
        } else if self.right(z) == NIL {
            x = self.left(z);
            self.replace_child(z, x);
        } else {
            let y = self.minimum(self.right(z));
            removed_color = self.color(y);
            x = self.right(y);
            if self.parent(y) == z {
                self.nodes[x].parent = y;
            } else {
                self.replace_child(y, x);
                let zr = self.right(z);
                self.nodes[y].right = zr;
                self.nodes[zr].parent = y;
            }
            self.replace_child(z, y);
            let zl = self.left(z);
            self.nodes[y].left = zl;
            self.nodes[zl].parent = y;
            let c = self.color(z);
            self.set_color(y, c);
        }
        if removed_color == Color::Black {
            self.delete_fixup(x);
        }
        self.nodes[NIL].parent = NIL;
        self.len -= 1;
        self.free.push(z);
        let node = &mut self.nodes[z];
        node.left = NIL;
        node.right = NIL;
        node.parent = NIL;
        node.entry.take().expect("live node")
    }

    fn delete_fixup(&mut self, mut x: usize) {
        while x != self.root && self.color(x) == Color::Black {
            let p = self.parent(x);
            if x == self.left(p) {
                let mut w = self.right(p);
                if self.color(w) == Color::Red {
                    self.set_color(w, Color::Black);
                    self.set_color(p, Color::Red);
                    self.rotate_left(p);
                    w = self.right(self.parent(x));
                }
                if self.color(self.left(w)) == Color::Black && self.color(self.right(w)) == Color::Black {
                    self.set_color(w, Color::Red);
                    x = self.parent(x);
                } else {
                    if self.color(self.right(w)) == Color::Black {
                        let wl = self.left(w);
                        self.set_color(wl, Color::Black);
                        self.set_color(w, Color::Red);
                        self.rotate_right(w);
                        w = self.right(self.parent(x));
                    }
                    let p = self.parent(x);
                    let pc = self.color(p);
                    self.set_color(w, pc);
                    self.set_color(p, Color::Black);
                    let wr = self.right(w);
                    self.set_color(wr, Color::Black);
                    self.rotate_left(p);
                    x = self.root;
                }
            } else {
                let mut w = self.left(p);
                if self.color(w) == Color::Red {
                    self.set_color(w, Color::Black);
                    self.set_color(p, Color::Red);
                    self.rotate_right(p);
                    w = self.left(self.parent(x));
                }
                if self.color(self.right(w)) == Color::Black && self.color(self.left(w)) == Color::Black {
                    self.set_color(w, Color::Red);
                    x = self.parent(x);
                } else {
                    if self.color(self.left(w)) == Color::Black {
                        let wr = self.right(w);
                        self.set_color(wr, Color::Black);
                        self.set_color(w, Color::Red);
                        self.rotate_left(w);
                        w = self.left(self.parent(x));
                    }
                    let p = self.parent(x);
                    let pc = self.color(p);
                    self.set_color(w, pc);
                    self.set_color(p, Color::Black);
                    let wl = self.left(w);
                    self.set_color(wl, Color::Black);
                    self.rotate_right(p);
                    x = self.root;
                }
            }
        }
        self.set_color(x, Color::Black);
    }

    /// In-order traversal.
    pub fn iter(&self) -> impl Iterator<Item = (&K, &V)> {
        let mut stack = Vec::new();
        let mut cur = self.root;
        std::iter::from_fn(move || {
            while cur != NIL {
                stack.push(cur);
                cur = self.left(cur);
            }
            let top = stack.pop()?;
            cur = self.right(top);
            self.nodes[top].entry.as_ref().map(|(k, v)| (k, v))
        })
    }

    /// Checks key order, parent links, and the red-black coloring rules
    /// (black root, no red node with a red child, equal black height on
    /// every root-to-leaf path).
    pub fn audit(&self) -> Result<(), String> {
        if self.color(NIL) != Color::Black {
            return Err("sentinel is red".into());
        }
        if self.root != NIL {
            if self.color(self.root) != Color::Black {
                return Err("root is red".into());
            }
            if self.parent(self.root) != NIL {
                return Err("root has a parent".into());
            }
        }
        let mut count = 0;
        self.audit_node(self.root, None, None, &mut count)?;
        if count != self.len {
            return Err(format!("{count} nodes reachable, len says {}", self.len));
        }
        Ok(())
    }

    fn audit_node(&self, n: usize, lo: Option<&K>, hi: Option<&K>, count: &mut usize) -> Result<usize, String> {
        if n == NIL {
            return Ok(1);
        }
        *count += 1;
        let key = self.key(n);
        if lo.is_some_and(|lo| key <= lo) || hi.is_some_and(|hi| key >= hi) {
            return Err(format!("node {n} violates key order"));
        }
        for child in [self.left(n), self.right(n)] {
            if child != NIL && self.parent(child) != n {
                return Err(format!("node {child} has a stale parent link"));
            }
            if self.color(n) == Color::Red && self.color(child) == Color::Red {
                return Err(format!("red node {n} has a red child"));
            }
        }
        let lb = self.audit_node(self.left(n), lo, Some(key), count)?;
        let rb = self.audit_node(self.right(n), Some(key), hi, count)?;
        if lb != rb {
            return Err(format!("node {n} has black heights {lb} and {rb}"));
        }
        Ok(lb + usize::from(self.color(n) == Color::Black))
    }
}
