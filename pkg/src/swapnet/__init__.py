"""End-to-end entanglement of quantum network paths built by entanglement swapping."""

__version__ = "0.1.0"
