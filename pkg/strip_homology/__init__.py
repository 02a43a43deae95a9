"""
strip_homology: homology of configuration spaces of disks in an infinite strip.

Cell complexes, discrete Morse matchings, explicit basis cycles, persistence
barcodes over the strip width and closed-form Betti growth in the number of
disks, with an independent Smith normal form oracle.
"""

__version__ = "0.1.0"
