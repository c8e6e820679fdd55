"""
Retraction Kit API Modules
==========================

Facade sub-APIs organized by topic, bound to one manifold and stopping rule.
"""

from retraction_kit.api.analysis import AnalysisAPI
from retraction_kit.api.geodesics import GeodesicsAPI
from retraction_kit.api.manifold import ManifoldAPI
from retraction_kit.api.retractions import RetractionsAPI

__all__ = [
    "ManifoldAPI",
    "RetractionsAPI",
    "GeodesicsAPI",
    "AnalysisAPI",
]
