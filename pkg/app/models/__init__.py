from .graph import DistanceTable, Graph, build_graph
from .partition import Partition
from .network import Assignment, GeneratedNetwork
from .detection import DetectionResult, FlowMatrix, MergeDendrogram, MergeStep
from .evaluation import ConfusionMatrix
