use super::{Network, Node};

/// Strongly connected components with their condensation order.
#[derive(Debug, Clone)]
pub struct Components {
    component: Vec<usize>,
    members: Vec<Vec<Node>>,
    has_in: Vec<bool>,
    has_out: Vec<bool>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    /// Component index of `v`. Indices follow a topological order of the
    /// condensation: every cross edge goes from a lower to a higher index.
    pub fn component_of(&self, v: Node) -> usize {
        self.component[v]
    }

    pub fn members(&self, c: usize) -> &[Node] {
        &self.members[c]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Node]> {
        self.members.iter().map(Vec::as_slice)
    }

    /// No edge enters component `c` from another component.
    pub fn is_source(&self, c: usize) -> bool {
        !self.has_in[c]
    }

    /// No edge leaves component `c` to another component.
    pub fn is_sink(&self, c: usize) -> bool {
        !self.has_out[c]
    }
}

/// Tarjan's algorithm, iterative so deep graphs cannot overflow the stack.
pub fn strongly_connected_components(g: &Network) -> Components {
    const UNSEEN: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<Node> = Vec::new();
    let mut call: Vec<(Node, usize)> = Vec::new();
    let mut next_index = 0;
    // Tarjan emits components in reverse topological order.
    let mut emitted: Vec<Vec<Node>> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            let nbrs = g.out_neighbors(v);
            if top.1 < nbrs.len() {
                let w = nbrs[top.1];
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                emitted.push(comp);
            }
        }
    }

    emitted.reverse();
    let mut component = vec![0; n];
    for (c, members) in emitted.iter().enumerate() {
        for &v in members {
            component[v] = c;
        }
    }
    let mut has_in = vec![false; emitted.len()];
    let mut has_out = vec![false; emitted.len()];
    for (u, v) in g.edges() {
        let (cu, cv) = (component[u], component[v]);
        if cu != cv {
            has_out[cu] = true;
            has_in[cv] = true;
        }
    }
    Components { component, members: emitted, has_in, has_out }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sizes(c: &Components) -> Vec<usize> {
        let mut s: Vec<_> = c.iter().map(<[Node]>::len).collect();
        s.sort_unstable();
        s
    }

    #[test]
    fn examples() {
        let tri = Network::from_edges(3, 1, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(sizes(&strongly_connected_components(&tri)), vec![3]);

        let one = Network::from_edges(2, 1, [(0, 1)]).unwrap();
        let c = strongly_connected_components(&one);
        assert_eq!(sizes(&c), vec![1, 1]);
        // 0 -> 1 so 0's component precedes 1's.
        assert!(c.component_of(0) < c.component_of(1));
        assert!(c.is_source(c.component_of(0)) && c.is_sink(c.component_of(1)));

        let two = Network::from_edges(6, 1, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let c = strongly_connected_components(&two);
        assert_eq!(sizes(&c), vec![3, 3]);
        assert_eq!(c.component_of(0), c.component_of(2));
        assert_ne!(c.component_of(0), c.component_of(3));
    }

    #[test]
    fn topological_order_on_chain_of_cycles() {
        // {0,1} -> {2,3} -> {4}
        let g = Network::from_edges(5, 2, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (3, 4)]).unwrap();
        let c = strongly_connected_components(&g);
        assert_eq!(c.count(), 3);
        for (u, v) in g.edges() {
            assert!(c.component_of(u) <= c.component_of(v));
        }
    }

    #[test]
    fn long_path_does_not_overflow() {
        let n = 200_000;
        let g = Network::from_edges(n, 1, (0..n - 1).map(|v| (v, v + 1))).unwrap();
        assert_eq!(strongly_connected_components(&g).count(), n);
    }
}
