"""GETain - GAN Ensemble Tool"""

__version__ = "0.1.0"
__author__ = "tainanle"
