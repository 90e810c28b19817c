"""Mining and selecting sets of local process models."""
from .align import Alignment, Move, Segment, Segmentation, align, explained_events, explained_events_of, \
    segment_lpm, segment_set
from .exceptions import InfeasibleAlignmentError, LpmkitError, ParseError, ResourceError, StateError
from .metrics import LpmSetReport, cardoso, coverage, cyclomatic, evaluate, fscore, non_redundancy, perplexity
from .mine import Lpm, MineConfig, MineResult, expand, initial_lpms, mine
from .petri import AcceptingPetriNet, LabeledPetriNet, Marking, enabled, fire, language, merge_global, \
    reachability_graph
from .select import LpmSet, alignment_based_selection, discover_simple, greedy_fscore_selection, \
    greedy_selection, heuristic_diversity_selection, merge_clogsgrow, remine
from .seqdb import EventRef, SequenceDatabase, filter_out, load, prefix, project
from .spm import SequentialPattern, mine_clogsgrow, pattern_to_net, repetitive_support
from .tree import Leaf, Node, normalize, parse, to_text, tree_to_net

__version__ = "0.1.0"
