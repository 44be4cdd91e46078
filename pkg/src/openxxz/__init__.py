"""Open critical XXZ chain with a generic boundary: algebra, Bethe ansatz and boundary scattering."""

__version__ = "0.1.0"
