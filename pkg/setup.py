from setuptools import find_packages, setup

setup(
    name="kthit",
    version="0.1.0",
    packages=find_packages(exclude=["tests"]),
    install_requires=["tqdm", "numpy", "pandas", "networkx"],
    entry_points={"console_scripts": ["kthit=kthit.cli:main"]},
)
