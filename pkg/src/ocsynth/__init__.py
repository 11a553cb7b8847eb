"""ocsynth: synthetic-dataset generation for object-centric detection.

Four synthesis routes (2D cut-paste, diffusion-conditioned cut-paste, 3D
random placement, 3D scene-aware placement) plus the splitting, mixing, and
occlusion-stratified evaluation tooling around them.
"""

__version__ = "0.1.0"
