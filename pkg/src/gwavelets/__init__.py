"""Wavelets and multiresolution analyses on compact abelian groups.

Subpackages and modules:

``groups``      torus and Cantor-group models, kernels, admissibility checks
``digits``      canonical coset representatives of ``Ĝ / Â^j(Ĝ)``
``fourier``     finitely supported Fourier expansions and their operators
``mra``         scaling-sequence validation and Gram oracles
``msf``         minimally supported frequency ladders and wavelets
``wavelets``    wavelets from any orthonormal scaling sequence
``transform``   analysis and synthesis
``cli``         the ``gwavelets`` command
"""

__version__ = "0.1.0"
