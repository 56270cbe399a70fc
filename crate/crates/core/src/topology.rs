use crate::error::{Error, Result};
use crate::tree::{Label, LabeledTree, WeightedTree};

/// An unweighted reduced labeled tree together with its non-twig edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    tree: LabeledTree,
    non_twig: Vec<usize>,
}

impl Topology {
    pub fn new(tree: LabeledTree) -> Result<Self> {
        if !tree.is_reduced() {
            return Err(Error::InvalidTopology("an unlabeled vertex has degree 2".into()));
        }
        let non_twig = tree.non_twig_edges();
        Ok(Topology { tree, non_twig })
    }

    pub fn of(tree: &WeightedTree) -> Result<Self> {
        Topology::new(tree.shape().clone())
    }

    pub fn tree(&self) -> &LabeledTree {
        &self.tree
    }

    pub fn n_labels(&self) -> Label {
        self.tree.n_labels()
    }

    pub fn leaf_label_count(&self) -> usize {
        self.tree.leaves().len()
    }

    pub fn non_leaf_label_count(&self) -> usize {
        self.n_labels() as usize - self.leaf_label_count()
    }

    /// Edge indices `e_1, …, e_N` of the edges with no leaf endpoint.
    pub fn non_twig_edges(&self) -> &[usize] {
        &self.non_twig
    }

    pub fn canonical_form(&self) -> String {
        self.tree.canonical_form()
    }

    /// The same topology with vertex ids `0..` in canonical order.
    pub fn canonicalized(&self) -> Topology {
        let (tree, _) = self.tree.canonically_relabeled(None);
        Topology::new(tree).expect("relabeling keeps the tree reduced")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::fixtures::*;
    use crate::tree::VertexId;

    #[test]
    fn counts_and_edges() {
        let topo = Topology::of(&labeled_path()).unwrap();
        assert_eq!(topo.leaf_label_count(), 2);
        assert_eq!(topo.non_leaf_label_count(), 2);
        assert_eq!(topo.non_twig_edges().len(), 1);
    }

    #[test]
    fn rejects_unreduced() {
        let tree = LabeledTree::new(
            [VertexId(0), VertexId(1), VertexId(2)],
            [(VertexId(0), VertexId(1)), (VertexId(0), VertexId(2))],
            [(1, VertexId(1)), (2, VertexId(2))],
        )
        .unwrap();
        assert!(matches!(Topology::new(tree), Err(Error::InvalidTopology(_))));
    }
}
