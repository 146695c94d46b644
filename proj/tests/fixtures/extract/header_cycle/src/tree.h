#ifndef TREE_H
#define TREE_H

#include "node.h"

class Tree {
 public:
  Node root;
  int size() const;
};

#endif
