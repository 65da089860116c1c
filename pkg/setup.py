from setuptools import setup, find_packages
from codecs import open
from os import path

here = path.abspath(path.dirname(__file__))

with open(path.join(here, 'README.md'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='contextlab',

    version='0.1.0.dev0',

    description='Fully contextual correlation inequalities: identities, bounds and NMR readout',
    long_description=long_description,
    long_description_content_type='text/markdown',
    python_requires='>=3.6, <4',

    classifiers=[
        # How mature is this project? Common values are
        #   3 - Alpha
        #   4 - Beta
        #   5 - Production/Stable
        'Development Status :: 3 - Alpha',

        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',

        'License :: OSI Approved :: Apache Software License',

        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.6',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
    ],

    keywords='quantum contextuality kcbs pauli nmr exclusivity-graph',

    packages=find_packages(exclude=['contrib', 'docs', 'tests', 'files']),
    package_data={
        'contextlab': ['schema/*.json'],
    },

    install_requires=[
        'numpy>=1.17',
    ],
    extras_require={
        'test': ['pytest', 'jsonschema'],
    },

    entry_points={
        'console_scripts': [
            'contextlab=contextlab._internal.cli:main',
        ],
    },
)
